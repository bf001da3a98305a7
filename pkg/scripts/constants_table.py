"""Print lambda_m, c_m and the log-band diagnostics for m = 1..M.

    python scripts/constants_table.py --m 10
"""

import argparse
import math
import time

from ulamkac.spectral import moment_constant


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=8)
    args = ap.parse_args()
    print(f"{'m':>3} {'dim':>5} {'lambda_m':>18} {'c_m':>12} {'log c_m':>9} {'band':>14} {'sec':>6}")
    for m in range(1, args.m + 1):
        t0 = time.perf_counter()
        r = moment_constant(m)
        lo, hi = r.conjectured_band
        print(f"{m:>3} {r.basis_size:>5} {r.lam:>18.10f} {r.c:>12.6f} {math.log(r.c):>9.4f} "
              f"{f'[{lo:.1f}, {hi:.1f}]':>14} {time.perf_counter() - t0:>6.2f}")


if __name__ == "__main__":
    main()
