"""Objective traces at several rule counts on benchmark-scale data.

Writes one trace per rule count to outputs/convergence/trace_R<k>.csv and
prints how many iterations each fit needed to settle.
"""

import argparse
import csv
import os

from sessc.clustering import ClusteringConfig, fit
from sessc.datasets import vehicle_scale_synthetic
from sessc.harness import fuzzy_index


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rules", default="10,20,30,50")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="outputs/convergence")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    data = vehicle_scale_synthetic()
    m = fuzzy_index(data.n_samples, data.n_features)
    for rules in [int(v) for v in args.rules.split(",")]:
        cfg = ClusteringConfig(rules, fuzziness=m, gamma=10.0, eta=0.1, beta=1.0,
                               seed=args.seed)
        model = fit(data.features, data.onehot, cfg)
        path = os.path.join(args.out, f"trace_R{rules}.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "objective"])
            for i, value in enumerate(model.objective_trace, start=1):
                writer.writerow([i, repr(value)])
        print(f"R={rules:3d}: {model.n_iter} iterations "
              f"(converged={model.converged}) -> {path}")


if __name__ == "__main__":
    main()
