"""Self-describing JSON records for fitted models.

Floats survive a JSON round trip exactly (repr-based encoding), so a reloaded
model predicts bit-identically to the one that was saved.
"""

from __future__ import annotations

import json
from dataclasses import asdict

import numpy as np

from .clustering import ClusteringConfig, ClusteringModel
from .tsk import TskConfig, TskModel

CLUSTERING_FORMAT = "sessc.clustering/1"
TSK_FORMAT = "sessc.tsk/1"


def clustering_to_record(model: ClusteringModel) -> dict:
    return {
        "format": CLUSTERING_FORMAT,
        "config": asdict(model.config),
        "seed": model.config.seed,
        "centers": model.centers.tolist(),
        "feature_weights": model.feature_weights.tolist(),
        "class_probs": None if model.class_probs is None else model.class_probs.tolist(),
        "data_center": model.data_center.tolist(),
        "objective_trace": [float(v) for v in model.objective_trace],
        "n_iter": model.n_iter,
        "converged": model.converged,
    }


def clustering_from_record(record: dict) -> ClusteringModel:
    if record.get("format") != CLUSTERING_FORMAT:
        raise ValueError(f"not a clustering model record: {record.get('format')!r}")
    cfg = ClusteringConfig(**record["config"])
    z = record["class_probs"]
    return ClusteringModel(
        centers=np.array(record["centers"], dtype=float),
        feature_weights=np.array(record["feature_weights"], dtype=float),
        memberships=None,  # training memberships are not part of the record
        class_probs=None if z is None else np.array(z, dtype=float),
        data_center=np.array(record["data_center"], dtype=float),
        config=cfg,
        objective_trace=list(record["objective_trace"]),
        n_iter=record["n_iter"],
        converged=record["converged"],
    )


def tsk_to_record(model: TskModel, class_names=None) -> dict:
    return {
        "format": TSK_FORMAT,
        "config": asdict(model.config),
        "centers": model.centers.tolist(),
        "spreads": model.spreads.tolist(),
        "coefficients": model.coefficients.tolist(),
        "n_classes": model.n_classes,
        "classes": list(class_names) if class_names is not None
                   else [str(c) for c in range(model.n_classes)],
    }


def tsk_from_record(record: dict) -> TskModel:
    if record.get("format") != TSK_FORMAT:
        raise ValueError(f"not a TSK model record: {record.get('format')!r}")
    return TskModel(
        centers=np.array(record["centers"], dtype=float),
        spreads=np.array(record["spreads"], dtype=float),
        coefficients=np.array(record["coefficients"], dtype=float),
        config=TskConfig(**record["config"]),
        n_classes=record["n_classes"],
    )


def save_model(model, path, class_names=None):
    if isinstance(model, ClusteringModel):
        record = clustering_to_record(model)
    elif isinstance(model, TskModel):
        record = tsk_to_record(model, class_names)
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    with open(path, "w") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")


def load_model(path):
    with open(path) as fh:
        record = json.load(fh)
    fmt = record.get("format")
    if fmt == CLUSTERING_FORMAT:
        return clustering_from_record(record)
    if fmt == TSK_FORMAT:
        return tsk_from_record(record)
    raise ValueError(f"unrecognized model record format {fmt!r}")
