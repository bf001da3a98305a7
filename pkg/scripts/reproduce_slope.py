"""Least-squares slope of ln E[X_n^3] against sqrt(n) on a ladder of windows.

The slope creeps up towards c_3 = 2 sqrt(lambda_3) as the window moves out.

    python scripts/reproduce_slope.py --max-n 10000
"""

import argparse

from ulamkac.acceptance import least_squares_slope
from ulamkac.recurrence import m3_log_series
from ulamkac.spectral import moment_constant


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=10000)
    ap.add_argument("--precision-bits", type=int, default=256)
    args = ap.parse_args()
    series = m3_log_series(args.max_n, args.precision_bits)
    c3 = moment_constant(3).c
    print(f"c_3 = {c3:.6f}")
    for hi in (100, 300, 1000, 3000, 10000, 30000, 100000):
        if hi > args.max_n:
            break
        lo = hi - hi // 10
        slope, intercept, rms = least_squares_slope(series[lo: hi + 1])
        print(f"[{lo:>6}, {hi:>6}]  slope={slope:.5f}  intercept={intercept:+.4f}  gap={c3 - slope:.5f}  rms={rms:.2e}")

if __name__ == "__main__":
    main()
