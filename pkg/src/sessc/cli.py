"""Command-line interface: bench, sweep, boundary, synth."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import clustering
from .data import (apply_zscore, fit_zscore, generate_synthetic,
                   write_dataset_csv)
from .harness import (ExperimentSpec, clustering_config, export_decision_grid,
                      fuzzy_index, resolve_dataset, run_benchmark, sweep,
                      write_grid_csv, write_manifest, write_splits_csv,
                      write_sweep_csv)
from .tsk import TskConfig, fit_tsk

PARAM_FLAGS = ("gamma", "eta", "beta", "h", "lam")
# lam is spelled out as "lambda" on the command line
FLAG_NAMES = {"lam": "lambda"}


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip() != ""]


def _add_dataset_args(p):
    p.add_argument("--dataset", help="delimited table with a header row")
    p.add_argument("--label-column", default="label",
                   help="label column name or index (default: label)")
    p.add_argument("--categorical-columns",
                   help="comma-separated feature columns to one-hot encode")
    p.add_argument("--synthetic", choices=["quadrant_gaussian", "circles", "spiral"],
                   help="generate a synthetic dataset instead of loading one")
    p.add_argument("--synth-n", type=int, help="synthetic sample count")
    p.add_argument("--synth-noise", type=float, help="synthetic noise scale")
    p.add_argument("--synth-seed", type=int, help="synthetic generator seed")


def _add_spec_args(p):
    _add_dataset_args(p)
    p.add_argument("--algorithm",
                   choices=["fcm_lse", "ewfcm_lse", "essc_lse", "sessc", "sessc_lse"])
    p.add_argument("--order", choices=["zero", "first"])
    p.add_argument("--rules", type=int, help="number of clusters/rules R")
    p.add_argument("--n-splits", type=int)
    p.add_argument("--train-fraction", type=float)
    p.add_argument("--cv-folds", type=int)
    p.add_argument("--master-seed", type=int)
    for name in PARAM_FLAGS:
        flag = FLAG_NAMES.get(name, name)
        p.add_argument(f"--grid-{flag}", type=_float_list, dest=f"grid_{name}",
                       help=f"search grid for {flag} (comma-separated)")
        p.add_argument(f"--fixed-{flag}", type=float, dest=f"fixed_{name}",
                       help=f"fixed value for {flag} (bypasses the search)")
    p.add_argument("--config", help="JSON file mirroring the experiment spec; "
                                    "explicit flags override it")


def _spec_from_args(args) -> ExperimentSpec:
    config = {}
    if args.config:
        with open(args.config) as fh:
            config = json.load(fh)

    def pick(flag, key, default=None):
        value = getattr(args, flag, None)
        if value is not None:
            return value
        return config.get(key, default)

    dataset = pick("dataset", "dataset")
    synthetic = pick("synthetic", "synthetic")
    if synthetic is not None and not isinstance(synthetic, dict):
        synthetic = {
            "kind": synthetic,
            "n": pick("synth_n", "synth_n", 1000),
            "noise": pick("synth_noise", "synth_noise", 0.0),
            "seed": pick("synth_seed", "synth_seed", 0),
        }
    elif isinstance(synthetic, dict):
        for flag, key in (("synth_n", "n"), ("synth_noise", "noise"), ("synth_seed", "seed")):
            value = getattr(args, flag, None)
            if value is not None:
                synthetic[key] = value
    if (dataset is None) == (synthetic is None):
        raise SystemExit("exactly one of --dataset / --synthetic is required")

    grids = dict(config.get("grids", {}))
    fixed = dict(config.get("fixed", {})) if config.get("fixed") else {}
    for name in PARAM_FLAGS:
        g = getattr(args, f"grid_{name}", None)
        if g is not None:
            grids[name] = g
        f = getattr(args, f"fixed_{name}", None)
        if f is not None:
            fixed[name] = f

    cats = pick("categorical_columns", "categorical_columns")
    if isinstance(cats, str):
        cats = [c.strip() for c in cats.split(",") if c.strip()]

    algorithm = pick("algorithm", "algorithm")
    if algorithm is None:
        raise SystemExit("--algorithm is required (flag or config)")
    return ExperimentSpec(
        dataset=dataset if dataset is not None else synthetic,
        algorithm=algorithm,
        order=pick("order", "order", "zero"),
        rules=pick("rules", "rules", 30),
        grids=grids,
        fixed=fixed or None,
        n_splits=pick("n_splits", "n_splits", 30),
        train_fraction=pick("train_fraction", "train_fraction", 0.7),
        cv_folds=pick("cv_folds", "cv_folds", 5),
        master_seed=pick("master_seed", "master_seed", 0),
        label_column=pick("label_column", "label_column", "label"),
        categorical_columns=cats,
    )


def _cmd_bench(args) -> int:
    spec = _spec_from_args(args)
    manifest = run_benchmark(spec)
    os.makedirs(args.out, exist_ok=True)
    write_manifest(manifest, os.path.join(args.out, "manifest.json"))
    write_splits_csv(manifest, os.path.join(args.out, "splits.csv"))
    print(f"{spec.algorithm}: mean RCA {manifest.mean_rca:.4f} "
          f"(std {manifest.std_rca:.4f}), mean BCA {manifest.mean_bca:.4f} "
          f"(std {manifest.std_bca:.4f}) over {spec.n_splits} splits")
    print(f"wrote {args.out}/manifest.json and {args.out}/splits.csv")
    return 0


def _cmd_sweep(args) -> int:
    spec = _spec_from_args(args)
    values = _float_list(args.values)
    if args.parameter == "R":
        values = [int(v) for v in values]
    manifests, table = sweep(spec, args.parameter, values)
    os.makedirs(args.out, exist_ok=True)
    for value, manifest in zip(values, manifests):
        write_manifest(manifest,
                       os.path.join(args.out, f"manifest_{args.parameter}={value}.json"))
    write_sweep_csv(table, os.path.join(args.out, "sweep.csv"))
    for row in table:
        print(f"{args.parameter}={row['value']}: mean RCA {row['mean_rca']:.4f}, "
              f"mean BCA {row['mean_bca']:.4f}")
    print(f"wrote {len(manifests)} manifests and sweep.csv to {args.out}")
    return 0


def _cmd_boundary(args) -> int:
    spec = _spec_from_args(args)
    if spec.fixed is None:
        raise SystemExit("boundary requires fixed parameter values (--fixed-*)")
    data = resolve_dataset(spec)
    if data.n_features != 2:
        raise SystemExit(f"boundary needs 2-D data, got {data.n_features} features")
    norm = fit_zscore(data)
    normed = apply_zscore(norm, data)
    m = fuzzy_index(normed.n_samples, normed.n_features)
    cfg = clustering_config(
        spec.algorithm, spec.rules, m, spec.master_seed,
        gamma=float(spec.fixed.get("gamma", 1.0)),
        eta=float(spec.fixed.get("eta", 0.0)),
        beta=float(spec.fixed.get("beta", 0.0)),
    )
    cmodel = clustering.fit(normed.features, normed.onehot, cfg)
    if spec.algorithm == "sessc":
        model = cmodel
    else:
        model = fit_tsk(normed, cmodel,
                        TskConfig(order=spec.order, h=float(spec.fixed["h"]),
                                  lam=float(spec.fixed["lam"])))
    if args.bounds:
        xmin, xmax, ymin, ymax = [float(v) for v in args.bounds.split(",")]
    else:
        lo = normed.features.min(axis=0)
        hi = normed.features.max(axis=0)
        pad = 0.1 * (hi - lo)
        xmin, xmax, ymin, ymax = lo[0] - pad[0], hi[0] + pad[0], lo[1] - pad[1], hi[1] + pad[1]
    rows = export_decision_grid(model, (xmin, xmax, ymin, ymax), args.resolution)
    write_grid_csv(rows, args.out)
    print(f"wrote {len(rows)} grid rows to {args.out}")
    return 0


def _cmd_synth(args) -> int:
    data = generate_synthetic(args.kind, args.n, args.noise, args.seed)
    write_dataset_csv(data, args.out, manifest_path=args.out + ".manifest.json")
    print(f"wrote {data.n_samples} samples ({data.n_classes} classes) to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sessc",
        description="Soft subspace clustering benchmarks and TSK fuzzy classifiers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="grid-searched multi-split benchmark")
    _add_spec_args(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("sweep", help="benchmark across one parameter's values")
    _add_spec_args(p)
    p.add_argument("--parameter", required=True,
                   choices=["R", "gamma", "eta", "beta", "h", "lam"])
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("boundary", help="export a decision grid for a 2-D model")
    _add_spec_args(p)
    p.add_argument("--bounds", help="xmin,xmax,ymin,ymax (default: data box + 10%%)")
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_boundary)

    p = sub.add_parser("synth", help="generate a synthetic dataset CSV")
    p.add_argument("--kind", required=True,
                   choices=["quadrant_gaussian", "circles", "spiral"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except Exception as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
