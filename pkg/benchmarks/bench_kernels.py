"""Benchmark the compiled kernel backend against the pure-Python fallback.

Times the raw objective evaluation and a full simplex minimization for each
parameter encoding, then prints a side-by-side table with speedups.

Usage:
    python benchmarks/bench_kernels.py [--arms D] [--repeats N]
"""

import argparse
import math
import time

import numpy as np

from mznet._kernels import _slow

try:
    from mznet._kernels import _fast
except ImportError:
    _fast = None

KIND_NAMES = {
    0: "entangled, free squeezing",
    1: "entangled, fixed intensities",
    2: "entangled, free split",
    3: "separable, free split",
    4: "separable, fixed intensities",
    5: "separable, fixed fraction",
}
DIMS = {0: lambda m: 2 * m + 1, 1: lambda m: m, 2: lambda m: 2 * m,
        3: lambda m: 2 * m, 4: lambda m: m, 5: lambda m: m}


def _case(rng, kind, m):
    vabs = np.abs(rng.normal(size=m)) + 0.05
    vabs /= np.linalg.norm(vabs) * math.sqrt(m)
    x = rng.normal(0.0, 1.0, DIMS[kind](m))
    n_t, n_s = 1e5, 50.0
    return x, vabs, n_t, n_s, n_s / n_t, (n_t - n_s) / m


def _time_objective(impl, kind, case, repeats):
    x, vabs, n_t, n_s, ratio, n_c = case
    start = time.perf_counter()
    for _ in range(repeats):
        impl.objective_value(x, 0, kind, vabs, n_t, n_s, ratio, n_c)
    return (time.perf_counter() - start) / repeats


def _time_minimize(impl, kind, case):
    x, vabs, n_t, n_s, ratio, n_c = case
    start = time.perf_counter()
    impl.nelder_mead(x, 0, kind, vabs, n_t, n_s, ratio, n_c)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--arms", type=int, default=8,
                        help="number of interferometers (default 8)")
    parser.add_argument("--repeats", type=int, default=20000,
                        help="objective evaluations per timing (default 20000)")
    args = parser.parse_args()

    if _fast is None:
        print("compiled backend unavailable; nothing to compare")
        return

    rng = np.random.default_rng(0)
    print(f"arms={args.arms}, repeats={args.repeats}")
    header = (f"{'encoding':<32} {'objective (us)':>22} "
              f"{'minimize (ms)':>22} {'speedup':>9}")
    print(header)
    print("-" * len(header))
    for kind in range(6):
        case = _case(rng, kind, args.arms)
        t_obj_fast = _time_objective(_fast, kind, case, args.repeats)
        t_obj_slow = _time_objective(_slow, kind, case, args.repeats)
        t_min_fast = _time_minimize(_fast, kind, case)
        t_min_slow = _time_minimize(_slow, kind, case)
        print(f"{KIND_NAMES[kind]:<32} "
              f"{t_obj_fast * 1e6:>9.2f} / {t_obj_slow * 1e6:>9.2f} "
              f"{t_min_fast * 1e3:>9.2f} / {t_min_slow * 1e3:>9.2f} "
              f"{t_min_slow / t_min_fast:>8.1f}x")


if __name__ == "__main__":
    main()
