"""Decision boundaries on the 2-D synthetic datasets across rule counts.

For circles and spiral data, fits the supervised clustering at each rule
count, evaluates it alone and with a ridge consequent head, and exports
decision-grid CSVs for plotting to outputs/boundaries/.
"""

import argparse
import os

import numpy as np

from sessc.clustering import ClusteringConfig, fit, predict
from sessc.data import apply_zscore, fit_zscore, generate_synthetic, random_split
from sessc.harness import export_decision_grid, write_grid_csv
from sessc.tsk import TskConfig, fit_tsk, predict_tsk


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--noise", type=float, default=0.1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--resolution", type=int, default=200)
    parser.add_argument("--out", default="outputs/boundaries")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    for kind in ("circles", "spiral"):
        data = generate_synthetic(kind, args.n, args.noise, args.seed)
        train, test = random_split(data, 0.7, args.seed)
        norm = fit_zscore(train)
        train_n, test_n = apply_zscore(norm, train), apply_zscore(norm, test)
        lo = train_n.features.min(axis=0) - 0.5
        hi = train_n.features.max(axis=0) + 0.5
        bounds = (lo[0], hi[0], lo[1], hi[1])
        print(f"\n{kind}:")
        for rules in (5, 10, 15, 20):
            cfg = ClusteringConfig(rules, fuzziness=2.0, gamma=100.0, eta=0.01,
                                   beta=0.1, seed=args.seed)
            cmodel = fit(train_n.features, train_n.onehot, cfg)
            alone = float(np.mean(predict(cmodel, test_n.features) == test_n.labels))
            tsk = fit_tsk(train_n, cmodel, TskConfig(order="zero", h=1.0, lam=0.01))
            headed = float(np.mean(predict_tsk(tsk, test_n.features)[1] == test_n.labels))
            print(f"  R={rules:2d}: clustering alone {alone:.3f}, with ridge head {headed:.3f}")
            for tag, model in (("alone", cmodel), ("lse", tsk)):
                rows = export_decision_grid(model, bounds, args.resolution)
                write_grid_csv(rows, os.path.join(args.out, f"{kind}_R{rules}_{tag}.csv"))
    print(f"\ndecision grids written to {args.out}/")


if __name__ == "__main__":
    main()
