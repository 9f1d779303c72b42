"""Full benchmark protocol on the curated UCI tables.

30 random 70/30 splits, z-score from each training side, 5-fold
cross-validated grid search, test-side metrics. Takes tens of minutes per
dataset/algorithm pair at full grids; set SESSC_WORKERS to parallelize.
"""

import argparse
import os
import sys

from sessc.datasets import fetch_biodeg, fetch_wdbc
from sessc.harness import ExperimentSpec, run_benchmark, write_manifest, write_splits_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--datasets", default="wdbc,biodeg")
    parser.add_argument("--algorithms", default="sessc_lse,fcm_lse")
    parser.add_argument("--order", default="zero", choices=["zero", "first"])
    parser.add_argument("--n-splits", type=int, default=30)
    parser.add_argument("--master-seed", type=int, default=1)
    parser.add_argument("--out", default="outputs/uci")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    paths = {}
    for name in args.datasets.split(","):
        if name == "wdbc":
            paths[name] = fetch_wdbc()
        elif name == "biodeg":
            try:
                paths[name] = fetch_biodeg()
            except OSError as err:
                print(f"skipping biodeg: {err}", file=sys.stderr)
        else:
            paths[name] = name  # treat as a CSV path

    for name, path in paths.items():
        for algorithm in args.algorithms.split(","):
            spec = ExperimentSpec(dataset=path, algorithm=algorithm,
                                  order=args.order, rules=30,
                                  n_splits=args.n_splits, master_seed=args.master_seed)
            manifest = run_benchmark(spec)
            tag = f"{name}_{algorithm}_{args.order}"
            write_manifest(manifest, os.path.join(args.out, f"{tag}.manifest.json"))
            write_splits_csv(manifest, os.path.join(args.out, f"{tag}.splits.csv"))
            print(f"{tag}: RCA {manifest.mean_rca:.4f} (std {manifest.std_rca:.4f}) "
                  f"BCA {manifest.mean_bca:.4f} (std {manifest.std_bca:.4f}) "
                  f"in {manifest.wall_clock_sec:.0f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
