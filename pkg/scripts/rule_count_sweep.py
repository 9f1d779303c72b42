"""Benchmark accuracy versus rule count with all other parameters fixed.

Defaults mirror the sensitivity setup (gamma=10, eta=0.1, beta=1, h=100,
lambda=0.01) over R in 10..100 on the benchmark-scale synthetic data, or on
a CSV table when one is supplied.
"""

import argparse
import os

from sessc.data import write_dataset_csv
from sessc.datasets import vehicle_scale_synthetic
from sessc.harness import (ALGO_PARAMS, ExperimentSpec, sweep, write_manifest,
                           write_sweep_csv)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dataset", help="CSV table (default: synthetic stand-in)")
    parser.add_argument("--algorithm", default="sessc_lse",
                        choices=["fcm_lse", "ewfcm_lse", "essc_lse", "sessc", "sessc_lse"])
    parser.add_argument("--values", default="10,20,30,40,50,60,70,80,90,100")
    parser.add_argument("--n-splits", type=int, default=10)
    parser.add_argument("--out", default="outputs/rule_count")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    dataset = args.dataset
    if dataset is None:
        dataset = os.path.join(args.out, "vehicle_scale.csv")
        write_dataset_csv(vehicle_scale_synthetic(), dataset)

    fixed_all = {"gamma": 10.0, "eta": 0.1, "beta": 1.0, "h": 100.0, "lam": 0.01}
    spec = ExperimentSpec(
        dataset=dataset, algorithm=args.algorithm, rules=30,
        n_splits=args.n_splits, master_seed=1,
        fixed={k: fixed_all[k] for k in ALGO_PARAMS[args.algorithm]})

    values = [int(v) for v in args.values.split(",")]
    manifests, table = sweep(spec, "R", values)
    for value, manifest in zip(values, manifests):
        write_manifest(manifest, os.path.join(args.out, f"manifest_R={value}.json"))
    write_sweep_csv(table, os.path.join(args.out, "sweep.csv"))
    for row in table:
        print(f"R={row['value']:3d}: RCA {row['mean_rca']:.4f} "
              f"BCA {row['mean_bca']:.4f}")


if __name__ == "__main__":
    main()
