"""Benchmark harness: repeated 70/30 splits with grid-searched cross-validation.

Per split: z-score statistics come from the training side only, the search
never touches the test side, and every random stage draws its seed from the
master seed by a fixed rule, so a rerun of the same spec reproduces the same
manifest byte for byte (wall clock aside), at any worker-parallelism degree.

Seed rule: stage seeds are SeedSequence([master_seed, split_index, stage,
(fold_index)]) states, with stages 0=split, 1=folds, 2=cv fit, 3=final fit.
"""

from __future__ import annotations

import csv
import itertools
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from ._version import __version__
from . import clustering
from .clustering import ClusteringConfig, ClusteringModel, DivergenceError
from .data import (Dataset, apply_zscore, fit_zscore, generate_synthetic,
                   kfold_indices, load_table, random_split)
from .metrics import bca, evaluate
from .tsk import (TskConfig, TskModel, design_matrix, estimate_spreads, fit_tsk,
                  log_firing_levels, normalized_firing, predict_tsk, ridge_solve)

log = logging.getLogger("sessc.harness")

WORKERS_ENV = "SESSC_WORKERS"

ALGORITHMS = ("fcm_lse", "ewfcm_lse", "essc_lse", "sessc", "sessc_lse")

DEFAULT_GRIDS = {
    "h": (0.01, 0.1, 1.0, 10.0, 100.0),
    "lam": (0.0001, 0.001, 0.01, 0.1, 1.0, 10.0, 100.0),
    "gamma": (0.01, 0.1, 1.0, 10.0, 100.0),
    "eta": (0.01, 0.05, 0.1, 0.3, 0.5),
    "beta": (0.01, 0.1, 1.0, 10.0, 100.0),
}

# Canonical enumeration order for grid points; argmax ties resolve to the
# first point in this order.
GRID_ORDER = ("h", "lam", "gamma", "eta", "beta")

ALGO_PARAMS = {
    "fcm_lse": ("h", "lam"),
    "ewfcm_lse": ("h", "lam", "gamma"),
    "essc_lse": ("h", "lam", "gamma", "eta"),
    "sessc": ("gamma", "eta", "beta"),
    "sessc_lse": ("h", "lam", "gamma", "eta", "beta"),
}

CLUSTER_PARAMS = ("gamma", "eta", "beta")

_STAGE_SPLIT, _STAGE_FOLDS, _STAGE_CV_FIT, _STAGE_FINAL = 0, 1, 2, 3

# Fixed protocol conventions, echoed into every manifest.
PROTOCOL = {
    "zscore": "fit on the training side, sample std (ddof=1), floor 1e-12",
    "stratified_splits": False,
    "label_mapping": "lexicographic over raw label strings",
    "seed_rule": "SeedSequence([master_seed, split_index, stage(, fold)])",
    "synthetic_geometry": {
        "circles": "radii 1 and 2, radial noise",
        "spiral": "2 arms, 1.5 revolutions, r = 0.25 + 2.25 t, arc-uniform",
        "quadrant_gaussian": "standard normal, one class per quadrant",
    },
}


def derive_seed(*path) -> int:
    """Deterministic integer seed from an integer path (the published rule)."""
    return int(np.random.SeedSequence(entropy=list(path)).generate_state(1)[0])


def fuzzy_index(n: int, d: int) -> float:
    """Sample-size-driven membership exponent: md/(md-2) for md=min(n, d-1)>2, else 2."""
    md = min(n, d - 1)
    return md / (md - 2.0) if md > 2 else 2.0


def _check_param_value(name: str, value) -> None:
    v = float(value)
    if name in ("h", "lam", "gamma") and not v > 0.0:
        raise ValueError(f"{name} values must be positive, got {value}")
    if name == "eta" and not 0.0 <= v < 1.0:
        raise ValueError(f"eta values must lie in [0, 1), got {value}")
    if name == "beta" and v < 0.0:
        raise ValueError(f"beta values must be >= 0, got {value}")


@dataclass
class ExperimentSpec:
    """One benchmark: a dataset, an algorithm, grids, and the split protocol.

    dataset: a delimited-table path, or a synthetic spec dict with keys
    kind/n/noise/seed. grids overrides the default search grids for the
    algorithm's applicable parameters. fixed bypasses the grid search with
    explicit values (required for sweeps and boundary runs).
    """

    dataset: str | dict
    algorithm: str
    order: str = "zero"
    rules: int = 30
    grids: dict = field(default_factory=dict)
    fixed: dict | None = None
    n_splits: int = 30
    train_fraction: float = 0.7
    cv_folds: int = 5
    master_seed: int = 0
    label_column: str | int = "label"
    categorical_columns: list | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.order not in ("zero", "first"):
            raise ValueError("order must be 'zero' or 'first'")
        if self.algorithm == "sessc" and self.order != "zero":
            raise ValueError("the standalone sessc classifier is zero order only")
        if self.rules < 1:
            raise ValueError("rules must be >= 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1)")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be >= 2")
        if self.n_splits < 1:
            raise ValueError("n_splits must be >= 1")
        applicable = ALGO_PARAMS[self.algorithm]
        for name, values in self.grids.items():
            if name not in applicable:
                raise ValueError(f"grid {name!r} does not apply to {self.algorithm}")
            if not values:
                raise ValueError(f"grid {name!r} is empty")
            for v in values:
                _check_param_value(name, v)
        if self.fixed is not None:
            missing = [p for p in applicable if p not in self.fixed]
            if missing:
                raise ValueError(f"fixed parameters missing {missing} for {self.algorithm}")
            for name in applicable:
                _check_param_value(name, self.fixed[name])

    def effective_grids(self) -> dict:
        return {p: tuple(self.grids.get(p, DEFAULT_GRIDS[p]))
                for p in ALGO_PARAMS[self.algorithm]}


def resolve_dataset(spec: ExperimentSpec) -> Dataset:
    if isinstance(spec.dataset, str):
        return load_table(spec.dataset, spec.label_column, spec.categorical_columns)
    d = dict(spec.dataset)
    return generate_synthetic(d["kind"], int(d["n"]), float(d.get("noise", 0.0)),
                              int(d.get("seed", 0)))


def clustering_config(algorithm: str, rules: int, fuzziness: float, seed: int,
                      gamma: float = 1.0, eta: float = 0.0, beta: float = 0.0,
                      max_iter: int = 100, tol: float = 1e-5) -> ClusteringConfig:
    """Map an algorithm name to its solver configuration."""
    if algorithm == "fcm_lse":
        return ClusteringConfig(rules, fuzziness, gamma=1.0, eta=0.0, beta=0.0,
                                weight_mode="frozen_uniform", seed=seed,
                                max_iter=max_iter, tol=tol)
    if algorithm == "ewfcm_lse":
        return ClusteringConfig(rules, fuzziness, gamma=gamma, eta=0.0, beta=0.0,
                                seed=seed, max_iter=max_iter, tol=tol)
    if algorithm == "essc_lse":
        return ClusteringConfig(rules, fuzziness, gamma=gamma, eta=eta, beta=0.0,
                                seed=seed, max_iter=max_iter, tol=tol)
    if algorithm in ("sessc", "sessc_lse"):
        return ClusteringConfig(rules, fuzziness, gamma=gamma, eta=eta, beta=beta,
                                seed=seed, max_iter=max_iter, tol=tol)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _cluster_grid_points(spec: ExperimentSpec, grids: dict, fixed_cluster=None):
    """Cluster-parameter points (gamma, eta, beta dicts) in canonical order."""
    if fixed_cluster is not None:
        return [dict(fixed_cluster)]
    names = [p for p in GRID_ORDER if p in grids and p in CLUSTER_PARAMS]
    if not names:
        return [{}]
    return [dict(zip(names, point))
            for point in itertools.product(*[grids[p] for p in names])]


def _argmax_canonical(scores: dict, names, grids) -> dict:
    """Highest mean score; ties go to the earliest point in enumeration order."""
    best_point, best = None, -np.inf
    for point in itertools.product(*[grids[p] for p in names]):
        s = scores.get(point, 0.0)
        if s > best:
            best, best_point = s, point
    chosen = {name: float(v) for name, v in zip(names, best_point)}
    chosen["cv_bca"] = float(best)
    return chosen


def _lse_fold_scores(ftr: Dataset, fval: Dataset, cmodel: ClusteringModel,
                     order: str, h_values, lam_values) -> dict:
    """(h, lam) -> validation balanced accuracy for one fitted clustering."""
    out = {}
    for h in h_values:
        try:
            spreads = estimate_spreads(ftr.features, cmodel.memberships,
                                       cmodel.centers, h)
            xhat_tr = design_matrix(normalized_firing(log_firing_levels(
                ftr.features, cmodel.centers, spreads)), ftr.features, order)
            xhat_val = design_matrix(normalized_firing(log_firing_levels(
                fval.features, cmodel.centers, spreads)), fval.features, order)
        except (DivergenceError, FloatingPointError, np.linalg.LinAlgError) as err:
            log.warning("head pipeline failed at h=%s: %s", h, err)
            for lam in lam_values:
                out[(h, lam)] = 0.0
            continue
        for lam in lam_values:
            try:
                b = ridge_solve(xhat_tr, ftr.onehot, lam)
                pred = (xhat_val @ b).argmax(axis=1)
                score = bca(fval.labels, pred, fval.n_classes, warn_missing=False)
                out[(h, lam)] = score if np.isfinite(score) else 0.0
            except (ValueError, np.linalg.LinAlgError) as err:
                log.warning("ridge solve failed at h=%s lam=%s: %s", h, lam, err)
                out[(h, lam)] = 0.0
    return out


def grid_search_cv(train: Dataset, spec: ExperimentSpec, seed: int) -> dict:
    """Exhaustive cross-validated search over the algorithm's applicable grids.

    Returns the chosen parameter record (plus its mean validation BCA). For
    sessc_lse the clustering parameters come from a prior sessc search and
    only (h, lam) are searched on top of them. Grid points whose fits diverge
    score zero for that fold; the search itself never aborts.
    """
    grids = spec.effective_grids()
    m = fuzzy_index(train.n_samples, train.n_features)
    folds = kfold_indices(train.n_samples, spec.cv_folds,
                          derive_seed(seed, _STAGE_FOLDS))

    if spec.algorithm == "sessc_lse":
        inner = replace(spec, algorithm="sessc", order="zero",
                        grids={k: v for k, v in spec.grids.items() if k in CLUSTER_PARAMS})
        prior = grid_search_cv(train, inner, seed)
        fixed_cluster = {p: prior[p] for p in ("gamma", "eta", "beta")}
    else:
        fixed_cluster = None

    if spec.algorithm == "sessc":
        names = [p for p in GRID_ORDER if p in grids]
        sums = {}
        for fold_i, (tr_idx, val_idx) in enumerate(folds):
            ftr, fval = train.subset(tr_idx), train.subset(val_idx)
            fit_seed = derive_seed(seed, _STAGE_CV_FIT, fold_i)
            for point in itertools.product(*[grids[p] for p in names]):
                params = dict(zip(names, point))
                try:
                    cfg = clustering_config("sessc", spec.rules, m, fit_seed, **params)
                    cmodel = clustering.fit(ftr.features, ftr.onehot, cfg)
                    pred = clustering.predict(cmodel, fval.features)
                    score = bca(fval.labels, pred, fval.n_classes, warn_missing=False)
                except (DivergenceError, FloatingPointError) as err:
                    log.warning("sessc fit diverged at %s: %s", params, err)
                    score = 0.0
                sums[point] = sums.get(point, 0.0) + (score if np.isfinite(score) else 0.0)
        means = {p: s / len(folds) for p, s in sums.items()}
        return _argmax_canonical(means, names, grids)

    # LSE-headed algorithms: cache one clustering fit per cluster-parameter
    # point per fold, then sweep the (h, lam) head on top of it.
    cluster_points = _cluster_grid_points(spec, grids, fixed_cluster)
    head_names = ("h", "lam")
    sums = {}
    for fold_i, (tr_idx, val_idx) in enumerate(folds):
        ftr, fval = train.subset(tr_idx), train.subset(val_idx)
        fit_seed = derive_seed(seed, _STAGE_CV_FIT, fold_i)
        for cparams in cluster_points:
            ckey = tuple(cparams[p] for p in sorted(cparams))
            try:
                cfg = clustering_config(spec.algorithm, spec.rules, m, fit_seed, **cparams)
                cmodel = clustering.fit(ftr.features, ftr.onehot, cfg)
                fold_scores = _lse_fold_scores(ftr, fval, cmodel, spec.order,
                                               grids["h"], grids["lam"])
            except (DivergenceError, FloatingPointError) as err:
                log.warning("clustering fit diverged at %s: %s", cparams, err)
                fold_scores = {(h, lam): 0.0
                               for h in grids["h"] for lam in grids["lam"]}
            for (h, lam), score in fold_scores.items():
                key = (ckey, h, lam)
                sums[key] = sums.get(key, 0.0) + score
    n_folds = len(folds)

    if fixed_cluster is not None:
        ckey = tuple(fixed_cluster[p] for p in sorted(fixed_cluster))
        means = {(h, lam): sums[(ckey, h, lam)] / n_folds
                 for h in grids["h"] for lam in grids["lam"]}
        chosen = _argmax_canonical(means, head_names, grids)
        chosen.update({p: float(v) for p, v in fixed_cluster.items()})
        chosen["sessc_cv_bca"] = prior["cv_bca"]
        return chosen

    cluster_names = [p for p in GRID_ORDER if p in grids and p in CLUSTER_PARAMS]
    names = ["h", "lam"] + cluster_names
    means = {}
    for cparams in cluster_points:
        ckey = tuple(cparams[p] for p in sorted(cparams))
        ctail = tuple(cparams[p] for p in cluster_names)
        for h in grids["h"]:
            for lam in grids["lam"]:
                means[(h, lam) + ctail] = sums[(ckey, h, lam)] / n_folds
    return _argmax_canonical(means, names, grids)


def _fit_final(spec: ExperimentSpec, train: Dataset, params: dict, seed: int):
    m = fuzzy_index(train.n_samples, train.n_features)
    cfg = clustering_config(
        spec.algorithm, spec.rules, m, seed,
        gamma=float(params.get("gamma", 1.0)),
        eta=float(params.get("eta", 0.0)),
        beta=float(params.get("beta", 0.0)),
    )
    cmodel = clustering.fit(train.features, train.onehot, cfg)
    if spec.algorithm == "sessc":
        return cmodel, None
    tcfg = TskConfig(order=spec.order, h=float(params["h"]), lam=float(params["lam"]))
    return cmodel, fit_tsk(train, cmodel, tcfg)


def _predict_final(cmodel: ClusteringModel, tmodel: TskModel | None, x) -> np.ndarray:
    if tmodel is None:
        return clustering.predict(cmodel, x)
    return predict_tsk(tmodel, x)[1]


def _run_split(spec: ExperimentSpec, data: Dataset, split_index: int) -> dict:
    split_seed = derive_seed(spec.master_seed, split_index, _STAGE_SPLIT)
    final_seed = derive_seed(spec.master_seed, split_index, _STAGE_FINAL)
    train, test = random_split(data, spec.train_fraction, split_seed)
    norm = fit_zscore(train)
    train_n, test_n = apply_zscore(norm, train), apply_zscore(norm, test)
    if spec.fixed is not None:
        chosen = {p: float(v) for p, v in spec.fixed.items()}
    else:
        chosen = grid_search_cv(train_n, spec, split_seed)
    cmodel, tmodel = _fit_final(spec, train_n, chosen, final_seed)
    y_pred = _predict_final(cmodel, tmodel, test_n.features)
    report = evaluate(test_n.labels, y_pred, data.n_classes, warn_missing=False)
    return {
        "split": split_index,
        "split_seed": split_seed,
        "cv_fold_seed": derive_seed(split_seed, _STAGE_FOLDS),
        "final_fit_seed": final_seed,
        "fuzziness": fuzzy_index(train_n.n_samples, train_n.n_features),
        "n_train": train_n.n_samples,
        "n_test": test_n.n_samples,
        "chosen": chosen,
        "metrics": report.to_dict(),
    }


def _run_split_task(args) -> dict:
    spec, data, split_index = args
    try:
        return _run_split(spec, data, split_index)
    except Exception as err:  # recorded per split; run_benchmark decides to abort
        log.warning("split %d failed: %s", split_index, err)
        return {"split": split_index, "error": f"{type(err).__name__}: {err}"}


@dataclass
class RunManifest:
    spec: dict
    per_split: list
    mean_rca: float
    std_rca: float
    mean_bca: float
    std_bca: float
    n_failed: int
    library_version: str
    wall_clock_sec: float

    def to_dict(self, include_wallclock: bool = True) -> dict:
        """Manifest content is a pure function of the spec; wall clock is the
        only environment-dependent field and can be excluded for comparison."""
        d = {
            "spec": self.spec,
            "protocol": PROTOCOL,
            "per_split": self.per_split,
            "mean_rca": self.mean_rca,
            "std_rca": self.std_rca,
            "mean_bca": self.mean_bca,
            "std_bca": self.std_bca,
            "n_failed": self.n_failed,
            "library_version": self.library_version,
        }
        if include_wallclock:
            d["wall_clock_sec"] = self.wall_clock_sec
        return d

    def to_json(self, include_wallclock: bool = True) -> str:
        return json.dumps(self.to_dict(include_wallclock), indent=2, sort_keys=True)


def workers_from_env() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_benchmark(spec: ExperimentSpec) -> RunManifest:
    """Run the full multi-split protocol and aggregate per-split metrics.

    Splits are independent work units; with SESSC_WORKERS > 1 they run in a
    process pool, each from its own pre-derived seed, so results match the
    sequential run exactly. Aborts if 10% or more of the splits fail.
    """
    data = resolve_dataset(spec)
    t0 = time.perf_counter()
    tasks = [(spec, data, i) for i in range(spec.n_splits)]
    workers = workers_from_env()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_split_task, tasks))
    else:
        results = [_run_split_task(t) for t in tasks]
    wall = time.perf_counter() - t0

    ok = [r for r in results if "error" not in r]
    failed = [r for r in results if "error" in r]
    if len(failed) * 10 >= spec.n_splits and failed:
        details = "; ".join(f"split {r['split']}: {r['error']}" for r in failed)
        raise RuntimeError(f"{len(failed)}/{spec.n_splits} splits failed: {details}")
    rcas = np.array([r["metrics"]["rca"] for r in ok])
    bcas = np.array([r["metrics"]["bca"] for r in ok])
    return RunManifest(
        spec=asdict(spec),
        per_split=results,
        mean_rca=float(rcas.mean()),
        std_rca=float(rcas.std(ddof=1)) if rcas.size > 1 else 0.0,
        mean_bca=float(bcas.mean()),
        std_bca=float(bcas.std(ddof=1)) if bcas.size > 1 else 0.0,
        n_failed=len(failed),
        library_version=__version__,
        wall_clock_sec=wall,
    )


SWEEPABLE = ("R", "gamma", "eta", "beta", "h", "lam")


def sweep(spec: ExperimentSpec, parameter: str, values):
    """Benchmark once per value with everything else held fixed (no search).

    Requires spec.fixed so the non-swept parameters are pinned. Returns the
    manifests and a combined table of per-value aggregates.
    """
    if parameter not in SWEEPABLE:
        raise ValueError(f"parameter must be one of {SWEEPABLE}")
    if spec.fixed is None:
        raise ValueError("sweep requires fixed parameter values (spec.fixed)")
    if parameter != "R" and parameter not in ALGO_PARAMS[spec.algorithm]:
        raise ValueError(f"{parameter!r} does not apply to {spec.algorithm}")
    manifests = []
    table = []
    for value in values:
        if parameter == "R":
            run_spec = replace(spec, rules=int(value))
        else:
            _check_param_value(parameter, value)
            run_spec = replace(spec, fixed={**spec.fixed, parameter: float(value)})
        manifest = run_benchmark(run_spec)
        manifests.append(manifest)
        table.append({
            "parameter": parameter,
            "value": value,
            "mean_rca": manifest.mean_rca,
            "std_rca": manifest.std_rca,
            "mean_bca": manifest.mean_bca,
            "std_bca": manifest.std_bca,
        })
    return manifests, table


def export_decision_grid(model, bounds, resolution: int):
    """Predicted class on a lattice over a 2-D box, as (x, y, label) rows.

    bounds is (xmin, xmax, ymin, ymax); rows iterate y outer, x inner.
    """
    if isinstance(model, TskModel):
        dim = model.centers.shape[1]
        predict_fn = lambda pts: predict_tsk(model, pts)[1]
    elif isinstance(model, ClusteringModel):
        dim = model.centers.shape[1]
        predict_fn = lambda pts: clustering.predict(model, pts)
    else:
        raise TypeError(f"cannot export a grid for {type(model).__name__}")
    if dim != 2:
        raise ValueError(f"decision grids need a 2-D model, got {dim} features")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    xmin, xmax, ymin, ymax = bounds
    xs = np.linspace(xmin, xmax, resolution)
    ys = np.linspace(ymin, ymax, resolution)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    labels = predict_fn(pts)
    return [(float(x), float(y), int(c)) for (x, y), c in zip(pts, labels)]


def write_manifest(manifest: RunManifest, path, include_wallclock: bool = True):
    with open(path, "w") as fh:
        fh.write(manifest.to_json(include_wallclock))
        fh.write("\n")


def write_splits_csv(manifest: RunManifest, path):
    """Per-split metrics as a delimited table (failed splits keep their row)."""
    chosen_keys = sorted({k for r in manifest.per_split
                          for k in r.get("chosen", {})})
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["split", "rca", "bca"] + chosen_keys + ["error"])
        for r in manifest.per_split:
            if "error" in r:
                writer.writerow([r["split"], "", ""] + [""] * len(chosen_keys)
                                + [r["error"]])
            else:
                writer.writerow(
                    [r["split"], repr(r["metrics"]["rca"]), repr(r["metrics"]["bca"])]
                    + [repr(r["chosen"][k]) if k in r["chosen"] else ""
                       for k in chosen_keys] + [""])


def write_grid_csv(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "label"])
        for x, y, label in rows:
            writer.writerow([repr(x), repr(y), label])


def write_sweep_csv(table, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["parameter", "value", "mean_rca", "std_rca",
                         "mean_bca", "std_bca"])
        for row in table:
            writer.writerow([row["parameter"], row["value"], repr(row["mean_rca"]),
                             repr(row["std_rca"]), repr(row["mean_bca"]),
                             repr(row["std_bca"])])
