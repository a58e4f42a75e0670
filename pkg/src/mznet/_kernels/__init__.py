"""Kernel backend selection.

The compiled Cython kernel is preferred when available; the pure-Python
mirror is used otherwise.  Set the environment variable
``MZNET_PURE_PYTHON=1`` to force the fallback (useful for benchmarking
and for debugging the kernels against each other).
"""

import os

if os.environ.get("MZNET_PURE_PYTHON"):
    from . import _slow as _impl
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _slow as _impl

BACKEND = _impl.BACKEND
nelder_mead = _impl.nelder_mead
objective_value = _impl.objective_value

__all__ = ["BACKEND", "nelder_mead", "objective_value"]
