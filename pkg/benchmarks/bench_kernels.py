"""Numba against numpy for the two hot kernels: the incidence scan and the discriminant.

    python benchmarks/bench_kernels.py [--points 20000] [--grid 2048] [--repeat 3]

With DOMDISC_NO_NUMBA=1 only the numpy rows are printed.
"""
import argparse
import time

import numpy as np

from domdisc._accel import HAS_NUMBA
from domdisc.kernels import discriminant, scan_cubic


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=20_000)
    ap.add_argument("--grid", type=int, default=2048)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    W = rng.standard_normal((args.points, 4))
    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])

    if HAS_NUMBA:  # compile outside the timed region
        scan_cubic(W[:8], args.grid, backend="numba")
        discriminant(W[:8], backend="numba")

    rows = []
    for b in backends:
        rows.append(("scan_cubic", b, best_of(lambda: scan_cubic(W, args.grid, backend=b), args.repeat)))
        rows.append(("discriminant", b, best_of(lambda: discriminant(W, backend=b), args.repeat)))

    print(f"{args.points} cubics, scan grid {args.grid}, best of {args.repeat}")
    print(f"{'kernel':14s} {'backend':8s} {'seconds':>10s} {'us/point':>10s}")
    for k, b, t in sorted(rows):
        print(f"{k:14s} {b:8s} {t:10.4f} {1e6 * t / args.points:10.2f}")
    if HAS_NUMBA:
        for k in ("scan_cubic", "discriminant"):
            t = {b: s for kk, b, s in rows if kk == k}
            print(f"{k}: numba speedup x{t['numpy'] / t['numba']:.1f}")
        d0, d1 = discriminant(W, backend="numpy"), discriminant(W, backend="numba")
        print(f"discriminant max backend difference {np.max(np.abs(d0 - d1)):.2e}")


if __name__ == "__main__":
    main()
