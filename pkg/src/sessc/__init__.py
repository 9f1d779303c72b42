"""Supervised enhanced soft subspace clustering and TSK fuzzy classifiers."""

from ._version import __version__
from .clustering import (ClusteringConfig, ClusteringModel, DivergenceError, fit,
                         kmeans_init, objective, predict, predict_memberships,
                         predict_proba, weighted_sq_distance)
from .data import (Dataset, Normalizer, apply_zscore, fit_zscore,
                   generate_synthetic, kfold_indices, load_table, make_dataset,
                   random_split)
from .harness import (ExperimentSpec, RunManifest, export_decision_grid,
                      fuzzy_index, grid_search_cv, run_benchmark, sweep)
from .metrics import MetricsReport, bca, evaluate, rca
from .serialize import load_model, save_model
from .tsk import (TskConfig, TskModel, design_matrix, estimate_spreads, fit_tsk,
                  log_firing_levels, normalized_firing, predict_tsk, ridge_solve)

__all__ = [
    "__version__",
    "ClusteringConfig", "ClusteringModel", "DivergenceError", "fit",
    "kmeans_init", "objective", "predict", "predict_memberships",
    "predict_proba", "weighted_sq_distance",
    "Dataset", "Normalizer", "apply_zscore", "fit_zscore",
    "generate_synthetic", "kfold_indices", "load_table", "make_dataset",
    "random_split",
    "ExperimentSpec", "RunManifest", "export_decision_grid", "fuzzy_index",
    "grid_search_cv", "run_benchmark", "sweep",
    "MetricsReport", "bca", "evaluate", "rca",
    "load_model", "save_model",
    "TskConfig", "TskModel", "design_matrix", "estimate_spreads", "fit_tsk",
    "log_firing_levels", "normalized_firing", "predict_tsk", "ridge_solve",
]
