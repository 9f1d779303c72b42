"""Dataset ingestion, encoding, normalization, splitting, and synthetic generators."""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

# Constant feature columns keep their slot; the std is floored instead of dropped.
STD_FLOOR = 1e-12

SYNTHETIC_KINDS = ("quadrant_gaussian", "circles", "spiral")


@dataclass
class Dataset:
    """A classification dataset with both integer and one-hot labels.

    features : (N, D) float array
    labels   : (N,) int array with values in [0, n_classes)
    onehot   : (N, n_classes) float array, exactly one 1 per row
    """

    features: np.ndarray
    labels: np.ndarray
    onehot: np.ndarray
    n_classes: int
    feature_names: list[str]
    label_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        self.onehot = np.asarray(self.onehot, dtype=float)
        n, d = self.features.shape
        if n < 1 or d < 1:
            raise ValueError(f"dataset needs N >= 1 and D >= 1, got shape {(n, d)}")
        if self.n_classes < 2:
            raise ValueError(f"need at least 2 classes, got {self.n_classes}")
        if self.labels.shape != (n,) or self.onehot.shape != (n, self.n_classes):
            raise ValueError("features, labels and onehot row counts disagree")
        if len(self.feature_names) != d:
            raise ValueError("feature_names length must equal feature count")
        if not self.label_names:
            self.label_names = [str(c) for c in range(self.n_classes)]

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, idx) -> "Dataset":
        """Row subset sharing this dataset's class space."""
        idx = np.asarray(idx, dtype=int)
        return Dataset(
            features=self.features[idx].copy(),
            labels=self.labels[idx].copy(),
            onehot=self.onehot[idx].copy(),
            n_classes=self.n_classes,
            feature_names=list(self.feature_names),
            label_names=list(self.label_names),
        )


def make_dataset(features, labels, n_classes=None, feature_names=None,
                 label_names=None) -> Dataset:
    """Build a Dataset from a feature matrix and integer labels."""
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if n_classes is None:
        n_classes = int(labels.max()) + 1
    onehot = np.zeros((labels.shape[0], n_classes))
    onehot[np.arange(labels.shape[0]), labels] = 1.0
    if feature_names is None:
        feature_names = [f"f{d}" for d in range(features.shape[1])]
    return Dataset(features, labels, onehot, n_classes, list(feature_names),
                   list(label_names) if label_names else [])


@dataclass
class Normalizer:
    """Per-column z-score statistics fit on a training set."""

    means: np.ndarray
    stds: np.ndarray


def _sniff_delimiter(header_line: str) -> str:
    return "\t" if "\t" in header_line else ","


def load_table(path, label_column, categorical_columns=None) -> Dataset:
    """Load a delimited table (comma or tab, header row required).

    Categorical feature columns are expanded one-hot in place, with levels
    sorted lexicographically. Raw labels are mapped to contiguous integers
    by lexicographic order of their string form, so the mapping does not
    depend on file row order.

    Parameters
    ----------
    path : file path
    label_column : column name, or integer position in the header
    categorical_columns : optional set of names/positions to one-hot encode
    """
    with open(path, "r", newline="") as fh:
        first = fh.readline()
        if not first:
            raise ValueError(f"{path}: empty file")
        delim = _sniff_delimiter(first)
        fh.seek(0)
        rows = list(csv.reader(fh, delimiter=delim))
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise ValueError(f"{path}: no data rows")

    def col_index(ref):
        if isinstance(ref, int):
            if not 0 <= ref < len(header):
                raise ValueError(f"column index {ref} out of range for {len(header)} columns")
            return ref
        if ref not in header:
            raise ValueError(f"column {ref!r} not found in header {header}")
        return header.index(ref)

    label_idx = col_index(label_column)
    cat_idx = {col_index(c) for c in (categorical_columns or ())}
    if label_idx in cat_idx:
        raise ValueError(f"label column {header[label_idx]!r} also listed as categorical feature")

    n_cols = len(header)
    for i, row in enumerate(body):
        if len(row) != n_cols:
            raise ValueError(f"{path}: row {i + 2} has {len(row)} cells, expected {n_cols}")
        for j, cell in enumerate(row):
            if cell.strip() == "":
                raise ValueError(f"{path}: missing value at row {i + 2}, column {header[j]!r}")

    raw_labels = [row[label_idx].strip() for row in body]
    label_names = sorted(set(raw_labels))
    if len(label_names) < 2:
        raise ValueError(f"label column {header[label_idx]!r} has a single distinct value")
    label_map = {name: c for c, name in enumerate(label_names)}
    labels = np.array([label_map[v] for v in raw_labels])

    columns = []
    feature_names = []
    for j in range(n_cols):
        if j == label_idx:
            continue
        cells = [row[j].strip() for row in body]
        if j in cat_idx:
            levels = sorted(set(cells))
            for level in levels:
                columns.append([1.0 if c == level else 0.0 for c in cells])
                feature_names.append(f"{header[j]}={level}")
        else:
            parsed = []
            for i, cell in enumerate(cells):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"{path}: cannot parse {cell!r} at row {i + 2}, column {header[j]!r}"
                    ) from None
            columns.append(parsed)
            feature_names.append(header[j])

    features = np.array(columns).T
    return make_dataset(features, labels, len(label_names), feature_names, label_names)


def fit_zscore(train: Dataset) -> Normalizer:
    """Column means and sample stds (ddof=1) from the training set only."""
    x = train.features
    means = x.mean(axis=0)
    stds = x.std(axis=0, ddof=1) if x.shape[0] > 1 else np.zeros(x.shape[1])
    return Normalizer(means=means, stds=np.maximum(stds, STD_FLOOR))


def apply_zscore(norm: Normalizer, data: Dataset) -> Dataset:
    if data.n_features != norm.means.shape[0]:
        raise ValueError(
            f"normalizer fit on {norm.means.shape[0]} features, data has {data.n_features}"
        )
    out = data.subset(np.arange(data.n_samples))
    out.features = (out.features - norm.means) / norm.stds
    return out


def random_split(data: Dataset, train_fraction: float, seed: int):
    """Deterministic random partition into (train, test) by seed.

    Train size is round(N * train_fraction). Splits are not stratified;
    a warning is emitted when a class is absent from either side.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    n = data.n_samples
    n_train = int(round(n * train_fraction))
    if n_train == 0 or n_train == n:
        raise ValueError(f"train_fraction {train_fraction} leaves an empty side for N={n}")
    perm = np.random.default_rng(seed).permutation(n)
    train = data.subset(np.sort(perm[:n_train]))
    test = data.subset(np.sort(perm[n_train:]))
    for side, name in ((train, "train"), (test, "test")):
        present = np.unique(side.labels)
        if present.size < data.n_classes:
            missing = sorted(set(range(data.n_classes)) - set(present.tolist()))
            warnings.warn(f"classes {missing} absent from the {name} side of the split")
    return train, test


def kfold_indices(n: int, k: int, seed: int):
    """k shuffled folds of [0, n); fold sizes differ by at most one."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} samples")
    perm = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(perm, k)
    pairs = []
    for i, fold in enumerate(folds):
        val = np.sort(fold)
        train = np.sort(np.concatenate([f for j, f in enumerate(folds) if j != i]))
        pairs.append((train, val))
    return pairs


def generate_synthetic(kind: str, n: int, noise: float, seed: int) -> Dataset:
    """Generate a 2-D synthetic classification dataset.

    quadrant_gaussian: standard normal samples, one class per quadrant
        (classes 0..3 counterclockwise from the positive quadrant); points
        landing exactly on an axis are resampled. `noise` is ignored.
    circles: two classes on concentric radii 1 and 2 with radial Gaussian
        noise of scale `noise`; classes alternate sample-by-sample.
    spiral: two interleaved Archimedean arms (1.5 revolutions, radius
        0.25 + 2.25 t), one class per arm, sampled uniformly along the arm's
        arc length, isotropic coordinate noise of scale `noise`; arms
        alternate sample-by-sample so even n gives an exact class balance.
    """
    if noise < 0:
        raise ValueError("noise must be >= 0")
    rng = np.random.default_rng(seed)
    if kind == "quadrant_gaussian":
        if n < 4:
            raise ValueError("quadrant_gaussian needs n >= 4")
        pts = rng.standard_normal((n, 2))
        on_axis = (pts == 0.0).any(axis=1)
        while on_axis.any():
            pts[on_axis] = rng.standard_normal((int(on_axis.sum()), 2))
            on_axis = (pts == 0.0).any(axis=1)
        quad_of = {(True, True): 0, (False, True): 1, (False, False): 2, (True, False): 3}
        labels = np.array([quad_of[(x > 0, y > 0)] for x, y in pts])
        return make_dataset(pts, labels, 4, ["x", "y"])
    if kind == "circles":
        if n < 2:
            raise ValueError("circles needs n >= 2")
        labels = np.arange(n) % 2
        radius = np.where(labels == 0, 1.0, 2.0) + noise * rng.standard_normal(n)
        angle = rng.uniform(0.0, 2.0 * np.pi, n)
        pts = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
        return make_dataset(pts, labels, 2, ["x", "y"])
    if kind == "spiral":
        if n < 2:
            raise ValueError("spiral needs n >= 2")
        labels = np.arange(n) % 2
        # sqrt gives uniform density along the arc (ds/dt grows with radius)
        t = np.sqrt(rng.uniform(0.0, 1.0, n))
        angle = 1.5 * 2.0 * np.pi * t + np.pi * labels
        radius = 0.25 + 2.25 * t
        pts = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
        pts += noise * rng.standard_normal((n, 2))
        return make_dataset(pts, labels, 2, ["x", "y"])
    raise ValueError(f"unknown synthetic kind {kind!r}; choose from {SYNTHETIC_KINDS}")


def dataset_manifest(data: Dataset, normalizer: Normalizer | None = None) -> dict:
    """Sidecar record describing a dataset: sizes, label mapping, z-score stats."""
    manifest = {
        "n_samples": data.n_samples,
        "n_features": data.n_features,
        "n_classes": data.n_classes,
        "feature_names": list(data.feature_names),
        "label_mapping": {name: c for c, name in enumerate(data.label_names)},
        "normalization": None,
    }
    if normalizer is not None:
        manifest["normalization"] = {
            "means": normalizer.means.tolist(),
            "stds": normalizer.stds.tolist(),
        }
    return manifest


def write_dataset_csv(data: Dataset, path, manifest_path=None):
    """Write a dataset as a comma-delimited table plus an optional manifest sidecar."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(data.feature_names) + ["label"])
        for x, y in zip(data.features, data.labels):
            writer.writerow([repr(float(v)) for v in x] + [data.label_names[y]])
    if manifest_path is not None:
        with open(manifest_path, "w") as fh:
            json.dump(dataset_manifest(data), fh, indent=2)
            fh.write("\n")
