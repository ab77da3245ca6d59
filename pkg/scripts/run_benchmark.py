#!/usr/bin/env python3
"""Time the pairwise W-test against chi-squared and logistic baselines.

Generates a synthetic null dataset (default 5,000 subjects x 100 markers),
runs every method over the identical exhaustive pair set, and writes a
timing TSV plus a hardware note.
"""

import argparse
import platform
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from wscan.baselines import run_benchmark, write_benchmark
from wscan.simulate import simulate_null_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-subjects", type=int, default=5000)
    ap.add_argument("--n-markers", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--methods", default="wtest,chisq,logistic")
    ap.add_argument("--out", default="benchmark.tsv")
    args = ap.parse_args()

    ds = simulate_null_dataset(args.n_subjects, args.n_markers, seed=args.seed)
    report = run_benchmark(ds, args.methods.split(","))
    write_benchmark(report, args.out)
    print(f"# hardware: {platform.machine()} / {platform.system()} {platform.release()}")
    print(f"# dataset: {ds.n_subjects} subjects x {ds.n_markers} markers")
    for r in report.rows:
        print(f"{r.method}\t{r.n_tests} tests\t{r.seconds:.3f}s\t{r.tests_per_second:.0f}/s")
    wt = next((r.seconds for r in report.rows if r.method == "wtest"), None)
    if wt:
        for r in report.rows:
            if r.method != "wtest":
                print(f"# {r.method} / wtest time ratio: {r.seconds / wt:.1f}x")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
