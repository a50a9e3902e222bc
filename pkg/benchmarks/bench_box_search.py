"""Time the box-search kernel: numba against the numpy fallback.

    python benchmarks/bench_box_search.py [--reps 5]

The first numba call includes compilation and is reported separately.
"""
import argparse
import time

import numpy as np

from padiclf._accel import HAVE_NUMBA, box_search


def systems(seed=7):
    """Random m x n integer systems with a planted kernel vector of sup norm 3."""
    rng = np.random.default_rng(seed)
    out = []
    for m, n in ((1, 5), (2, 6), (2, 7)):
        y = rng.integers(-3, 4, size=n)
        y[0] = 3
        A = rng.integers(-5, 6, size=(m, n))
        # project the rows onto y-perp, staying integral
        A = A * int(y @ y) - np.outer(A @ y, y)
        out.append(A)
    return out


def clock(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--bound", type=int, default=4)
    args = ap.parse_args()
    mats = systems()
    if HAVE_NUMBA:
        t = time.perf_counter()
        box_search(mats[0], 1, use_numba=True)
        print(f"numba compile+first call: {time.perf_counter() - t:.3f}s")
    for A in mats:
        t_np = clock(lambda: box_search(A, args.bound, use_numba=False), args.reps)
        line = f"n={A.shape[1]} m={A.shape[0]}  numpy {t_np * 1e3:8.2f} ms"
        if HAVE_NUMBA:
            r1 = box_search(A, args.bound, use_numba=False)
            r2 = box_search(A, args.bound, use_numba=True)
            assert r1 == r2, (r1, r2)
            t_nb = clock(lambda: box_search(A, args.bound, use_numba=True), args.reps)
            line += f"  numba {t_nb * 1e3:8.2f} ms  speedup x{t_np / max(t_nb, 1e-9):.1f}"
        print(line)


if __name__ == "__main__":
    main()
