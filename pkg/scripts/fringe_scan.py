"""Fringe shift as a function of the vacuum angle.

    python3 scripts/fringe_scan.py --points 25 --out fringe_scan.csv
"""
import argparse
import csv
import math

import numpy as np

from dyonlab.interferometry import SlitGeometry, fringe_shift


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--L", type=float, default=1000.0)
    ap.add_argument("--d", type=float, default=10.0)
    ap.add_argument("--w", type=float, default=1.0)
    ap.add_argument("--wavelength", type=float, default=1.0)
    ap.add_argument("--delta0-bar", type=float, default=0.0)
    ap.add_argument("--points", type=int, default=17)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    geom = SlitGeometry(args.L, args.d, args.w, args.wavelength, args.delta0_bar)
    rows = []
    for theta in np.linspace(0, 4 * math.pi, args.points):
        r = fringe_shift(geom, theta)
        err = (r.delta_x - r.predicted) / r.period
        rows.append((theta, r.delta_x, r.predicted, err))
        print(f"theta={theta:7.4f}  shift {r.delta_x:10.4f}  predicted {r.predicted:10.4f}  error {err:+.1e} periods")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "delta_x", "predicted", "error_periods"])
            w.writerows(rows)


if __name__ == "__main__":
    main()
