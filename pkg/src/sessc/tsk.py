"""TSK fuzzy classifiers with clustering-derived antecedents and ridge consequents.

Each rule's antecedent is a product of per-feature Gaussians (center from a
cluster center, spread from membership-weighted scatter). Consequents are
constants (zero order) or affine functions of the input (first order) and are
solved jointly by ridge least squares on normalized firing levels.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .clustering import ClusteringModel
from .data import Dataset

EPS_SIGMA = 1e-8

ORDERS = ("zero", "first")


@dataclass
class TskConfig:
    """order: consequent form; h: spread scale; lam: ridge weight.

    spread_squared selects the Gaussian exponent denominator: False uses
    2*sigma (the form the spreads are calibrated for here), True uses the
    textbook 2*sigma^2. The h grid absorbs the difference in practice.
    """

    order: str = "zero"
    h: float = 1.0
    lam: float = 0.01
    spread_squared: bool = False

    def __post_init__(self):
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}")
        if not self.h > 0.0:
            raise ValueError("h must be positive")
        if not self.lam > 0.0:
            raise ValueError("lam must be positive")


@dataclass
class TskModel:
    centers: np.ndarray       # (R, D)
    spreads: np.ndarray       # (R, D), floored at EPS_SIGMA
    coefficients: np.ndarray  # (R, C) zero order, (R*(D+1), C) first order
    config: TskConfig
    n_classes: int


def estimate_spreads(x, u, centers, h: float) -> np.ndarray:
    """Membership-weighted standard deviation per rule and feature, scaled by h.

    Uses memberships at power one. Rules with zero total membership fall back
    to h times the global per-feature standard deviation (with a warning);
    every entry is floored at EPS_SIGMA.
    """
    mass = u.sum(axis=0)
    dead = mass == 0.0
    safe_mass = np.where(dead, 1.0, mass)
    sq = (x[:, None, :] - centers[None, :, :]) ** 2
    var = np.einsum("nr,nrd->rd", u, sq) / safe_mass[:, None]
    spreads = h * np.sqrt(var)
    if dead.any():
        warnings.warn(f"rules {np.flatnonzero(dead).tolist()} have zero membership mass; "
                      "using global feature spreads")
        spreads[dead] = h * x.std(axis=0)
    return np.maximum(spreads, EPS_SIGMA)


def log_firing_levels(x, centers, spreads, spread_squared: bool = False) -> np.ndarray:
    """(N, R) log firing levels; log space avoids underflow for far samples."""
    x = np.asarray(x, dtype=float)
    denom = 2.0 * spreads ** 2 if spread_squared else 2.0 * spreads
    sq = (x[:, None, :] - centers[None, :, :]) ** 2
    return -(sq / denom[None, :, :]).sum(axis=2)


def normalized_firing(log_f) -> np.ndarray:
    """Row-normalize exponentiated log firing levels (max-subtracted)."""
    t = log_f - log_f.max(axis=1, keepdims=True)
    e = np.exp(t)
    return e / e.sum(axis=1, keepdims=True)


def design_matrix(fbar, x, order: str) -> np.ndarray:
    """Consequent design matrix from normalized firing levels.

    Zero order returns fbar itself. First order lays rule r's block out as
    [fbar_r, fbar_r * x_1, ..., fbar_r * x_D], matching the row stacking of
    the coefficient matrix.
    """
    if order == "zero":
        return fbar
    if order == "first":
        n = x.shape[0]
        aug = np.concatenate([np.ones((n, 1)), x], axis=1)
        return (fbar[:, :, None] * aug[:, None, :]).reshape(n, -1)
    raise ValueError(f"order must be one of {ORDERS}")


def ridge_solve(xhat, y, lam: float) -> np.ndarray:
    """Solve (xhat' xhat + lam I) B = xhat' y by Cholesky factorization."""
    if not lam > 0.0:
        raise ValueError("lam must be positive")
    if not (np.all(np.isfinite(xhat)) and np.all(np.isfinite(y))):
        raise ValueError("non-finite design matrix or targets")
    gram = xhat.T @ xhat + lam * np.eye(xhat.shape[1])
    rhs = xhat.T @ y
    try:
        c, low = scipy.linalg.cho_factor(gram)
        return scipy.linalg.cho_solve((c, low), rhs)
    except np.linalg.LinAlgError:
        # numerically semidefinite gram despite lam > 0
        return np.linalg.solve(gram, rhs)


def fit_tsk(train: Dataset, clustering: ClusteringModel, config: TskConfig) -> TskModel:
    """Spreads from the clustering memberships, consequents by ridge least squares."""
    x, y = train.features, train.onehot
    if clustering.memberships is None:
        raise ValueError("clustering model carries no training memberships")
    if clustering.memberships.shape[0] != x.shape[0] or clustering.centers.shape[1] != x.shape[1]:
        raise ValueError("clustering model was not fit on these training features")
    spreads = estimate_spreads(x, clustering.memberships, clustering.centers, config.h)
    fbar = normalized_firing(
        log_firing_levels(x, clustering.centers, spreads, config.spread_squared))
    coefficients = ridge_solve(design_matrix(fbar, x, config.order), y, config.lam)
    return TskModel(
        centers=clustering.centers.copy(),
        spreads=spreads,
        coefficients=coefficients,
        config=config,
        n_classes=train.n_classes,
    )


def predict_tsk(model: TskModel, x):
    """(scores, labels) for new samples; label ties resolve to the lowest index."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != model.centers.shape[1]:
        raise ValueError(f"expected (n, {model.centers.shape[1]}) features, got {x.shape}")
    fbar = normalized_firing(
        log_firing_levels(x, model.centers, model.spreads, model.config.spread_squared))
    scores = design_matrix(fbar, x, model.config.order) @ model.coefficients
    return scores, scores.argmax(axis=1)
