"""Time the compiled and pure-Python Ryser kernels side by side.

    python benchmarks/bench_permanent.py --sizes 8 10 12 14 16 --repeat 3
"""
import argparse
import time

import numpy as np

from mhd import _kernels_py

try:
    from mhd import _kernels
except ImportError:
    _kernels = None


def best_time(fn, A, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn(A)
        best = min(best, time.perf_counter() - t0)
    return best, value


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14, 16])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if _kernels is None:
        print("compiled extension not built; reinstall with Cython available to compare")
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>3} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9} {'|diff|':>10}")
    for n in args.sizes:
        A = np.ascontiguousarray(rng.normal(size=(n, n)))
        t_py, v_py = best_time(_kernels_py.ryser, A, args.repeat)
        if _kernels is None:
            print(f"{n:>3} {t_py:>12.4g} {'-':>12} {'-':>9} {'-':>10}")
            continue
        t_c, v_c = best_time(_kernels.ryser, A, args.repeat)
        print(f"{n:>3} {t_py:>12.4g} {t_c:>12.4g} {t_py / t_c:>8.0f}x {abs(v_py - v_c):>10.2e}")


if __name__ == "__main__":
    main()
