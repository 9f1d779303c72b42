"""Benchmark dataset acquisition: materialize UCI tables as local CSV files.

Files land in the directory named by SESSC_DATA_DIR (default ./data) in the
canonical loader format: comma-delimited, header row, a `label` column.
"""

from __future__ import annotations

import csv
import os
import urllib.request

import numpy as np

from .data import Dataset, make_dataset

DATA_DIR_ENV = "SESSC_DATA_DIR"

BIODEG_URL = ("https://archive.ics.uci.edu/ml/machine-learning-databases/"
              "00254/biodeg.csv")


def data_dir() -> str:
    return os.environ.get(DATA_DIR_ENV, os.path.join(os.getcwd(), "data"))


def _write_rows(path, header, rows):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def fetch_wdbc(path=None) -> str:
    """Breast-cancer diagnostic table (569 x 30, 2 classes), bundled with
    scikit-learn, so no network access is needed."""
    path = path or os.path.join(data_dir(), "wdbc.csv")
    if os.path.exists(path):
        return path
    from sklearn.datasets import load_breast_cancer

    bunch = load_breast_cancer()
    header = [name.replace(" ", "_") for name in bunch.feature_names] + ["label"]
    rows = [[repr(float(v)) for v in x] + [bunch.target_names[t]]
            for x, t in zip(bunch.data, bunch.target)]
    _write_rows(path, header, rows)
    return path


def fetch_biodeg(path=None, timeout=30) -> str:
    """QSAR biodegradation table (1055 x 41, 2 classes) from the UCI archive.

    The source file is semicolon-delimited without a header; it is rewritten
    in the canonical format. Raises OSError when the archive is unreachable
    and no local copy exists.
    """
    path = path or os.path.join(data_dir(), "biodeg.csv")
    if os.path.exists(path):
        return path
    try:
        raw = urllib.request.urlopen(BIODEG_URL, timeout=timeout).read().decode()
    except Exception as err:
        raise OSError(
            f"cannot fetch the biodegradation dataset: {err}; place a copy at "
            f"{path} (41 numeric columns plus a final label column)") from err
    rows = []
    for line in raw.strip().splitlines():
        cells = line.split(";")
        rows.append([repr(float(v)) for v in cells[:-1]] + [cells[-1].strip()])
    if not rows or len(rows[0]) != 42:
        raise OSError(f"unexpected biodegradation file layout from {BIODEG_URL}")
    header = [f"f{d}" for d in range(41)] + ["label"]
    _write_rows(path, header, rows)
    return path


def vehicle_scale_synthetic(seed=29, n=846, d=18, n_classes=4, sub_per_class=8,
                            spread=0.6, sub_scale=1.5) -> Dataset:
    """Synthetic stand-in at mid-sized tabular benchmark scale.

    Four classes, each a mixture of Gaussian subclusters in 18 dimensions,
    z-scored; used for convergence and sensitivity experiments when the real
    benchmark tables are not on disk.
    """
    rng = np.random.default_rng(seed)
    subs = rng.normal(0.0, sub_scale, (n_classes * sub_per_class, d))
    sub_class = np.repeat(np.arange(n_classes), sub_per_class)
    pick = rng.integers(0, len(subs), n)
    x = subs[pick] + spread * rng.standard_normal((n, d))
    labels = sub_class[pick]
    x = (x - x.mean(axis=0)) / x.std(axis=0, ddof=1)
    return make_dataset(x, labels, n_classes)
