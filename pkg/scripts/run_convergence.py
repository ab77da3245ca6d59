#!/usr/bin/env python3
"""Dispersion of the estimated degrees of freedom across bootstrap sizes.

Runs the h/f estimator on a synthetic null dataset for a grid of bootstrap
counts B and several seeds, then prints mean and standard deviation of the
fitted f per (B, k) so convergence in B can be inspected.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from wscan.hf import hf_convergence_report
from wscan.simulate import simulate_null_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-subjects", type=int, default=500)
    ap.add_argument("--n-markers", type=int, default=1000)
    ap.add_argument("--order", type=int, choices=(1, 2), default=1)
    ap.add_argument("--B-grid", default="100,200,400,800")
    ap.add_argument("--n-seeds", type=int, default=10)
    ap.add_argument("--n-sample", type=int, default=500)
    ap.add_argument("--data-seed", type=int, default=30)
    args = ap.parse_args()

    ds = simulate_null_dataset(
        args.n_subjects, args.n_markers, seed=args.data_seed, maf_range=(0.02, 0.5)
    )
    grid = [int(b) for b in args.B_grid.split(",")]
    rows = hf_convergence_report(
        ds, args.order, grid, list(range(args.n_seeds)), n_sample=args.n_sample
    )
    print("B\tk\tmean_f\tsd_f\tcv_f")
    for r in rows:
        sd = f"{r.sd_f:.4f}" if r.sd_f is not None else "NA"
        cv = f"{r.sd_f / r.mean_f:.4%}" if r.sd_f is not None else "NA"
        print(f"{r.B}\t{r.k}\t{r.mean_f:.4f}\t{sd}\t{cv}")


if __name__ == "__main__":
    main()
