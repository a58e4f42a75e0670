"""Build script: compiles the optional Cython kernel extension.

If Cython or a C compiler is unavailable the build falls back to a
pure-Python package; mznet selects the pure-Python kernels at import
time when the extension is missing.
"""

from setuptools import setup

try:
    import numpy as np
    from setuptools import Extension
    from Cython.Build import cythonize

    ext_module = Extension(
        "mznet._kernels._fast",
        ["src/mznet/_kernels/_fast.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext_modules = cythonize(
        [ext_module],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
