"""Histogram data for the standardised log of X_n, to eyeball log-normality.

Writes bin centres, empirical density and the standard normal density as CSV.

    python scripts/mc_histogram.py --n 400 --samples 20000 > hist.csv
"""

import argparse
import csv
import math
import sys

import numpy as np

from ulamkac.pathspace import log_normal_statistics


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--samples", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--bins", type=int, default=40)
    args = ap.parse_args()
    z, mu, sigma = log_normal_statistics(args.n, args.samples, args.seed)
    density, edges = np.histogram(z, bins=args.bins, density=True)
    centres = (edges[:-1] + edges[1:]) / 2
    w = csv.writer(sys.stdout, lineterminator="\n")
    sys.stdout.write(f"# n={args.n} samples={args.samples} seed={args.seed} mu={mu:.6f} sigma={sigma:.6f}\n")
    sys.stdout.write(f"# skew={float(((z - z.mean()) ** 3).mean()):.4f} "
                     f"excess_kurtosis={float(((z - z.mean()) ** 4).mean() - 3):.4f}\n")
    w.writerow(["z", "density", "normal"])
    for c, d in zip(centres, density):
        w.writerow([f"{c:.4f}", f"{d:.5f}", f"{math.exp(-c * c / 2) / math.sqrt(2 * math.pi):.5f}"])


if __name__ == "__main__":
    main()
