"""Classification metrics: raw and balanced accuracy."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


@dataclass
class MetricsReport:
    rca: float
    bca: float
    per_class_rca: np.ndarray
    confusion: np.ndarray

    def to_dict(self) -> dict:
        return {
            "rca": self.rca,
            "bca": self.bca,
            "per_class_rca": [None if np.isnan(v) else float(v) for v in self.per_class_rca],
            "confusion": self.confusion.tolist(),
        }


def rca(y_true, y_pred) -> float:
    """Fraction of exact matches."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.size == 0:
        raise ValueError("empty input")
    if y_true.shape != y_pred.shape:
        raise ValueError("length mismatch")
    return float(np.mean(y_true == y_pred))


def per_class_recalls(y_true, y_pred, n_classes: int) -> np.ndarray:
    """Recall per class; NaN for classes absent from y_true."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    recalls = np.full(n_classes, np.nan)
    for c in range(n_classes):
        mask = y_true == c
        if mask.any():
            recalls[c] = np.mean(y_pred[mask] == c)
    return recalls


def bca(y_true, y_pred, n_classes: int, warn_missing: bool = True) -> float:
    """Unweighted mean of per-class recalls.

    Classes absent from y_true are excluded from the mean (with a warning
    unless warn_missing is False).
    """
    recalls = per_class_recalls(y_true, y_pred, n_classes)
    missing = np.isnan(recalls)
    if missing.all():
        raise ValueError("empty input")
    if missing.any() and warn_missing:
        warnings.warn(f"classes {np.flatnonzero(missing).tolist()} absent from y_true; "
                      "excluded from balanced accuracy")
    return float(np.nanmean(recalls))


def confusion_matrix(y_true, y_pred, n_classes: int) -> np.ndarray:
    """Counts indexed [true, predicted]."""
    m = np.zeros((n_classes, n_classes), dtype=int)
    for t, p in zip(np.asarray(y_true), np.asarray(y_pred)):
        m[t, p] += 1
    return m


def evaluate(y_true, y_pred, n_classes: int, warn_missing: bool = True) -> MetricsReport:
    recalls = per_class_recalls(y_true, y_pred, n_classes)
    return MetricsReport(
        rca=rca(y_true, y_pred),
        bca=bca(y_true, y_pred, n_classes, warn_missing=warn_missing),
        per_class_rca=recalls,
        confusion=confusion_matrix(y_true, y_pred, n_classes),
    )
