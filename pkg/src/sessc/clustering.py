"""Supervised enhanced soft subspace clustering (SESSC).

A single alternating-minimization solver covers the whole family:

    beta = 0, eta = 0, frozen uniform weights  -> FCM
    beta = 0, eta = 0, learned weights         -> EWFCM
    beta = 0, eta > 0                          -> ESSC
    beta > 0                                   -> SESSC

The objective combines per-cluster weighted compactness, an entropy
regularizer on the feature weights (temperature gamma), a between-cluster
separation reward (strength eta, measured from the global data center),
and a supervision term (strength beta) that cross-entropies each sample's
label against its clusters' class profiles.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

# Floors: class probabilities before logarithms, distances before negative
# powers, jitter for coincident k-means centers.
EPS_Z = 1e-12
EPS_D = 1e-12
CENTER_JITTER = 1e-6
KMEANS_MAX_ITER = 100

WEIGHT_MODES = ("learned", "frozen_uniform")
Z_NORMS = ("row", "paper_column")


class DivergenceError(RuntimeError):
    """Raised when an update produces non-finite state."""


@dataclass
class ClusteringConfig:
    """Hyperparameters for the unified solver.

    n_clusters : number of clusters (= rules when feeding a TSK model)
    fuzziness  : membership exponent m, strictly > 1
    gamma      : feature-weight entropy temperature, > 0
    eta        : between-cluster separation strength, in [0, 1)
    beta       : label supervision strength, >= 0 (0 ignores labels)
    weight_mode: "learned" entropy-regularized weights, or "frozen_uniform"
                 (plain FCM geometry, every weight 1/D)
    z_norm     : "row" keeps class profiles row-stochastic (the constrained
                 optimum); "paper_column" normalizes each class column
                 across clusters instead, for compatibility experiments
    """

    n_clusters: int
    fuzziness: float = 2.0
    gamma: float = 1.0
    eta: float = 0.0
    beta: float = 0.0
    max_iter: int = 100
    tol: float = 1e-5
    seed: int = 0
    weight_mode: str = "learned"
    z_norm: str = "row"

    def __post_init__(self):
        if self.n_clusters < 1:
            raise ValueError("n_clusters must be >= 1")
        if not self.fuzziness > 1.0:
            raise ValueError("fuzziness must be strictly greater than 1")
        if not self.gamma > 0.0:
            raise ValueError("gamma must be positive")
        if not 0.0 <= self.eta < 1.0:
            raise ValueError("eta must lie in [0, 1)")
        if self.beta < 0.0:
            raise ValueError("beta must be >= 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.weight_mode not in WEIGHT_MODES:
            raise ValueError(f"weight_mode must be one of {WEIGHT_MODES}")
        if self.z_norm not in Z_NORMS:
            raise ValueError(f"z_norm must be one of {Z_NORMS}")


@dataclass
class ClusteringModel:
    """Fitted solver state. Immutable by convention once returned."""

    centers: np.ndarray            # (R, D)
    feature_weights: np.ndarray    # (R, D), rows on the simplex
    memberships: np.ndarray | None  # (N, R) training memberships; None after reload
    class_probs: np.ndarray | None  # (R, C); None when fit without labels
    data_center: np.ndarray        # (D,) column mean of the training features
    config: ClusteringConfig
    objective_trace: list = field(default_factory=list)
    n_iter: int = 0
    converged: bool = False


def kmeans_init(x, n_clusters: int, seed: int) -> np.ndarray:
    """Seed cluster centers with one k-means run.

    Greedy distance-weighted probabilistic seeding (a few candidates per
    step, keeping the one that most reduces the potential) followed by Lloyd
    iterations to a fixed point (at most 100). Coincident centers are
    jittered by 1e-6 with a warning so every cluster starts distinct.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if n_clusters > n:
        raise ValueError(f"cannot place {n_clusters} centers on {n} samples")
    rng = np.random.default_rng(seed)
    n_trials = 2 + int(np.log(n_clusters))

    centers = np.empty((n_clusters, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    closest = ((x - centers[0]) ** 2).sum(axis=1)
    for k in range(1, n_clusters):
        total = closest.sum()
        if total > 0:
            candidates = rng.choice(n, size=n_trials, p=closest / total)
        else:
            candidates = rng.integers(n, size=n_trials)
        best_idx, best_closest, best_total = None, None, np.inf
        for idx in candidates:
            cand_closest = np.minimum(closest, ((x - x[idx]) ** 2).sum(axis=1))
            cand_total = cand_closest.sum()
            if cand_total < best_total:
                best_idx, best_closest, best_total = idx, cand_closest, cand_total
        centers[k] = x[best_idx]
        closest = best_closest

    assign = None
    x_sq = (x * x).sum(axis=1)
    for _ in range(KMEANS_MAX_ITER):
        # expanded quadratic form: only the argmin matters here
        d = x_sq[:, None] - 2.0 * (x @ centers.T) + (centers * centers).sum(axis=1)
        new_assign = d.argmin(axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for r in range(n_clusters):
            mask = assign == r
            if mask.any():
                centers[r] = x[mask].mean(axis=0)

    for r in range(1, n_clusters):
        while any(np.array_equal(centers[r], centers[s]) for s in range(r)):
            warnings.warn("coincident k-means centers; applying 1e-6 jitter")
            centers[r] = centers[r] + CENTER_JITTER * rng.standard_normal(x.shape[1])

    if not np.all(np.isfinite(centers)):
        raise DivergenceError("k-means produced non-finite centers")
    return centers


def weighted_sq_distance(x, v, w) -> float:
    """sum_d w_d (x_d - v_d)^2 for vectors of equal length."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if not x.shape == v.shape == w.shape:
        raise ValueError("x, v and w must have identical shapes")
    return float(np.sum(w * (x - v) ** 2))


def _sq_diffs(x, centers) -> np.ndarray:
    """(N, R, D) tensor of squared per-feature differences."""
    diff = x[:, None, :] - centers[None, :, :]
    return diff * diff


def _pairwise_weighted_sq(x, centers, weights, sq=None) -> np.ndarray:
    """(N, R) matrix of per-cluster weighted squared distances."""
    if sq is None:
        sq = _sq_diffs(x, centers)
    return np.einsum("nrd,rd->nr", sq, weights)


def _center_separation(centers, weights, data_center) -> np.ndarray:
    """(R,) weighted squared distances of centers from the global center."""
    return np.einsum("rd,rd->r", weights, (centers - data_center) ** 2)


def _safe_log_probs(class_probs) -> np.ndarray:
    """Logarithms of class profiles after flooring at EPS_Z and row renormalizing."""
    z = np.maximum(class_probs, EPS_Z)
    return np.log(z / z.sum(axis=1, keepdims=True))


def _simplex_rows_from_costs(cost, fuzziness) -> np.ndarray:
    """Memberships u_r proportional to cost_r^(-1/(m-1)), rows summing to 1.

    Rows containing zero costs put uniform mass on the zero entries.
    Computed in log space: cost ratios span many decades when m is near 1.
    """
    u = np.zeros_like(cost)
    zero = cost <= 0.0
    has_zero = zero.any(axis=1)
    if has_zero.any():
        z = zero[has_zero]
        u[has_zero] = z / z.sum(axis=1, keepdims=True)
    rest = ~has_zero
    if rest.any():
        t = (-1.0 / (fuzziness - 1.0)) * np.log(cost[rest])
        t -= t.max(axis=1, keepdims=True)
        e = np.exp(t)
        u[rest] = e / e.sum(axis=1, keepdims=True)
    return u


def update_memberships(x, onehot, centers, weights, class_probs, data_center,
                       config: ClusteringConfig, sq=None) -> np.ndarray:
    """Closed-form membership block update.

    Per-sample, per-cluster cost is the weighted distance minus the eta-scaled
    center separation, plus beta times the cross entropy of the sample's label
    against the cluster's class profile; negative costs clip to zero and
    zero-cost clusters share the row's mass uniformly.
    """
    cost = _pairwise_weighted_sq(x, centers, weights, sq)
    cost -= config.eta * _center_separation(centers, weights, data_center)[None, :]
    if config.beta > 0.0:
        cost -= config.beta * (onehot @ _safe_log_probs(class_probs).T)
    u = _simplex_rows_from_costs(np.maximum(cost, 0.0), config.fuzziness)
    if not np.all(np.isfinite(u)):
        raise DivergenceError("non-finite memberships")
    return u


def update_centers(x, u, data_center, config: ClusteringConfig,
                   prev_centers, um=None) -> np.ndarray:
    """Closed-form center block update.

    v_r = sum_n u_nr^m (x_n - eta v0) / ((1 - eta) sum_n u_nr^m). Clusters
    with zero total membership mass keep their previous center.
    """
    if um is None:
        um = u ** config.fuzziness
    mass = um.sum(axis=0)
    dead = mass == 0.0
    safe_mass = np.where(dead, 1.0, mass)
    centers = (um.T @ x - config.eta * np.outer(mass, data_center))
    centers /= (1.0 - config.eta) * safe_mass[:, None]
    if dead.any():
        warnings.warn(f"clusters {np.flatnonzero(dead).tolist()} have zero mass; "
                      "centers left unchanged")
        centers[dead] = prev_centers[dead]
    if not np.all(np.isfinite(centers)):
        raise DivergenceError("non-finite centers")
    return centers


def update_weights(x, u, centers, data_center, config: ClusteringConfig,
                   um=None, sq=None) -> np.ndarray:
    """Closed-form feature-weight block update (softmax over features).

    w_rd is proportional to exp(-s_rd / gamma) where s_rd accumulates the
    membership-weighted scatter of feature d around center r minus the
    eta-scaled spread of the center itself. frozen_uniform returns 1/D.
    """
    n_features = x.shape[1]
    if config.weight_mode == "frozen_uniform":
        return np.full((config.n_clusters, n_features), 1.0 / n_features)
    if um is None:
        um = u ** config.fuzziness
    if sq is None:
        sq = _sq_diffs(x, centers)
    s = np.einsum("nr,nrd->rd", um, sq)
    s -= config.eta * um.sum(axis=0)[:, None] * (centers - data_center) ** 2
    if not np.all(np.isfinite(s)):
        raise DivergenceError("non-finite weight scatter")
    t = -s / config.gamma
    t -= t.max(axis=1, keepdims=True)
    e = np.exp(t)
    return e / e.sum(axis=1, keepdims=True)


def update_class_probs(onehot, u, config: ClusteringConfig, um=None) -> np.ndarray:
    """Closed-form class-profile block update.

    The membership-mass-weighted class histogram of each cluster, which is
    already row-stochastic for one-hot labels. z_norm="paper_column" then
    renormalizes each class column across clusters instead.
    """
    if um is None:
        um = u ** config.fuzziness
    mass = um.sum(axis=0)
    n_classes = onehot.shape[1]
    dead = mass == 0.0
    safe_mass = np.where(dead, 1.0, mass)
    z = (um.T @ onehot) / safe_mass[:, None]
    if dead.any():
        warnings.warn(f"clusters {np.flatnonzero(dead).tolist()} have zero mass; "
                      "class profiles set uniform")
        z[dead] = 1.0 / n_classes
    if config.z_norm == "paper_column":
        z = z / np.maximum(z.sum(axis=0, keepdims=True), EPS_Z)
    return z


def _objective_terms(x, onehot, centers, weights, u, class_probs, data_center,
                     config: ClusteringConfig, um=None, sq=None):
    """Four cost terms: compactness, weight entropy, separation, supervision."""
    if um is None:
        um = u ** config.fuzziness
    compact = float((um * _pairwise_weighted_sq(x, centers, weights, sq)).sum())
    # w log w with the 0 log 0 = 0 convention
    wlogw = weights * np.log(np.where(weights > 0.0, weights, 1.0))
    entropy = config.gamma * float(wlogw.sum())
    separation = -config.eta * float(
        (um.sum(axis=0) * _center_separation(centers, weights, data_center)).sum()
    )
    if config.beta > 0.0:
        xent = -(onehot @ _safe_log_probs(class_probs).T)
        label = config.beta * float((um * xent).sum())
    else:
        label = 0.0
    return compact, entropy, separation, label


def objective(x, onehot, model: ClusteringModel) -> float:
    """Value of the clustering cost at the model's state."""
    return sum(_objective_terms(
        x, onehot, model.centers, model.feature_weights, model.memberships,
        model.class_probs, model.data_center, model.config,
    ))


def fit(x, onehot, config: ClusteringConfig, init_centers=None) -> ClusteringModel:
    """Alternating minimization to a center fixed point.

    Centers start from k-means (or an explicit init_centers override),
    feature weights uniform, class profiles uniform. Each iteration updates
    memberships, centers, weights, then class profiles, and stops when the
    Frobenius norm of the center change drops below tol.

    onehot may be None only when beta = 0; beta = 0 with labels present
    yields the same centers/weights/memberships as without them.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError("x must be a 2-D array")
    n, d = x.shape
    if config.n_clusters > n:
        raise ValueError(f"n_clusters={config.n_clusters} exceeds sample count {n}")
    if onehot is None:
        if config.beta > 0.0:
            raise ValueError("beta > 0 requires one-hot labels")
    else:
        onehot = np.asarray(onehot, dtype=float)
        if onehot.shape[0] != n:
            raise ValueError("labels and features disagree on sample count")

    data_center = x.mean(axis=0)
    if init_centers is not None:
        centers = np.array(init_centers, dtype=float)
        if centers.shape != (config.n_clusters, d):
            raise ValueError("init_centers has the wrong shape")
    else:
        centers = kmeans_init(x, config.n_clusters, config.seed)
    weights = np.full((config.n_clusters, d), 1.0 / d)
    class_probs = None
    if onehot is not None:
        class_probs = np.full((config.n_clusters, onehot.shape[1]), 1.0 / onehot.shape[1])

    trace = []
    prev_centers = centers.copy()
    memberships = None
    converged = False
    iteration = 0
    sq = _sq_diffs(x, centers)  # shared across the updates that fix centers
    for iteration in range(1, config.max_iter + 1):
        try:
            memberships = update_memberships(
                x, onehot, centers, weights, class_probs, data_center, config, sq=sq)
            um = memberships ** config.fuzziness
            centers = update_centers(x, memberships, data_center, config,
                                     prev_centers, um=um)
            sq = _sq_diffs(x, centers)
            weights = update_weights(x, memberships, centers, data_center, config,
                                     um=um, sq=sq)
            if onehot is not None:
                class_probs = update_class_probs(onehot, memberships, config, um=um)
        except DivergenceError as err:
            raise DivergenceError(f"fit diverged at iteration {iteration}: {err}") from err
        trace.append(sum(_objective_terms(
            x, onehot, centers, weights, memberships, class_probs, data_center,
            config, um=um, sq=sq)))
        if np.linalg.norm(prev_centers - centers) < config.tol:
            converged = True
            break
        prev_centers = centers.copy()

    return ClusteringModel(
        centers=centers,
        feature_weights=weights,
        memberships=memberships,
        class_probs=class_probs,
        data_center=data_center,
        config=config,
        objective_trace=trace,
        n_iter=iteration,
        converged=converged,
    )


def predict_memberships(model: ClusteringModel, x) -> np.ndarray:
    """Memberships for new samples (no label term; costs floored at EPS_D)."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != model.centers.shape[1]:
        raise ValueError(f"expected (n, {model.centers.shape[1]}) features, got {x.shape}")
    cfg = model.config
    cost = _pairwise_weighted_sq(x, model.centers, model.feature_weights)
    cost -= cfg.eta * _center_separation(
        model.centers, model.feature_weights, model.data_center)[None, :]
    return _simplex_rows_from_costs(np.maximum(cost, EPS_D), cfg.fuzziness)


def predict_proba(model: ClusteringModel, x) -> np.ndarray:
    """Class probabilities: memberships times class profiles, row normalized."""
    if model.class_probs is None:
        raise ValueError("model was fit without labels; no class profiles to predict with")
    if model.config.beta == 0.0:
        warnings.warn("model was fit with beta = 0; class profiles did not shape "
                      "the clustering and may be uninformative")
    scores = predict_memberships(model, x) @ model.class_probs
    totals = scores.sum(axis=1, keepdims=True)
    assert np.all(totals > 0.0), "all-zero probability row"
    return scores / totals


def predict(model: ClusteringModel, x) -> np.ndarray:
    """Predicted class labels; ties resolve to the lowest class index."""
    return predict_proba(model, x).argmax(axis=1)
