"""Closed-form cross section against the partial-wave oracle on an (alpha, phi) grid.

    python3 scripts/scatter_table.py --regularization abel --out scatter.csv
"""
import argparse
import csv
import math

import numpy as np

from dyonlab.scattering import compare_table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--m-max", type=int, default=2000)
    ap.add_argument("--regularization", choices=["abel", "cesaro"], default="abel")
    ap.add_argument("--angles", type=int, default=11)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    rows = compare_table(np.arange(1, 10) / 10, np.linspace(math.pi / 6, math.pi, args.angles), args.k,
                         args.m_max, args.regularization)
    for a in np.arange(1, 10) / 10:
        sub = [r for r in rows if r["alpha"] == a]
        print(f"alpha={a:.1f}  max rel. error {max(r['rel_error'] for r in sub):.2e}")
    print(f"overall max rel. error {max(r['rel_error'] for r in rows):.2e}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, ["alpha", "phi", "closed_form", "partial_wave", "rel_error"])
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    main()
