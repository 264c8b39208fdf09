"""Dataset container, CSV I/O and per-feature normalization."""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class DataMatrix:
    """An ``n_samples x n_features`` real matrix with optional integer labels.

    ``values`` is copied and made read-only on construction so instances can
    be shared freely.
    """

    values: np.ndarray
    labels: Optional[np.ndarray] = None
    feature_ids: Optional[tuple] = None
    class_names: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, order="C")
        if values.ndim != 2:
            raise InputError(f"values must be 2-D, got shape {values.shape}")
        n, d = values.shape
        if n < 2 or d < 1:
            raise InputError(f"need n_samples >= 2 and n_features >= 1, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InputError("values contain NaN or Inf")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

        if self.labels is not None:
            labels = np.array(self.labels, dtype=np.int64).ravel()
            if labels.shape[0] != n:
                raise InputError(f"labels have length {labels.shape[0]}, expected {n}")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

        if self.feature_ids is None:
            object.__setattr__(self, "feature_ids", tuple(f"f{j}" for j in range(d)))
        else:
            ids = tuple(str(f) for f in self.feature_ids)
            if len(ids) != d:
                raise InputError(f"{len(ids)} feature ids for {d} features")
            object.__setattr__(self, "feature_ids", ids)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    @property
    def n_classes(self) -> Optional[int]:
        if self.labels is None:
            return None
        return int(np.unique(self.labels).size)

    def with_values(self, values: np.ndarray) -> "DataMatrix":
        """Same labels and feature ids, new values of the same shape."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self.values.shape:
            raise InputError(f"shape {values.shape} does not match {self.values.shape}")
        return DataMatrix(values, self.labels, self.feature_ids, self.class_names)

    def select(self, columns: Sequence[int]) -> "DataMatrix":
        columns = list(columns)
        return DataMatrix(
            self.values[:, columns],
            self.labels,
            tuple(self.feature_ids[j] for j in columns),
            self.class_names,
        )


def _remap_labels(raw: Sequence[str]):
    """Map arbitrary class tokens to 0..c-1, ordering numerically when possible."""
    tokens = sorted(set(raw))
    try:
        tokens = sorted(tokens, key=float)
    except ValueError:
        pass
    index = {t: i for i, t in enumerate(tokens)}
    return np.array([index[t] for t in raw], dtype=np.int64), tuple(tokens)


def load_csv(
    path: Union[str, os.PathLike],
    label_col: Union[str, int, None] = None,
    has_header: bool = True,
) -> DataMatrix:
    """Read a comma-separated numeric table.

    ``label_col`` selects the class column by header name or 0-based index;
    every other column must be numeric. Rows are reported 1-based as they
    appear in the file (the header line counts as row 1).
    """
    if not os.path.isfile(path):
        raise InputError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise InputError(f"{path}: empty file")

    first_data_line = 1
    if has_header:
        header = [h.strip() for h in rows[0]]
        rows = rows[1:]
        first_data_line = 2
    else:
        header = [f"f{j}" for j in range(len(rows[0]))]
    width = len(header)

    label_idx = None
    if label_col is not None:
        if isinstance(label_col, str) and label_col in header:
            label_idx = header.index(label_col)
        elif isinstance(label_col, str) and label_col.lstrip("-").isdigit():
            label_idx = int(label_col)
        elif isinstance(label_col, int):
            label_idx = label_col
        else:
            raise InputError(f"{path}: label column {label_col!r} not found in header")
        if not -width <= label_idx < width:
            raise InputError(f"{path}: label column index {label_idx} out of range")
        label_idx %= width

    feature_cols = [j for j in range(width) if j != label_idx]
    values = np.empty((len(rows), len(feature_cols)))
    raw_labels = []
    for i, row in enumerate(rows):
        line = i + first_data_line
        if len(row) != width:
            raise InputError(f"{path}: row {line} has {len(row)} fields, expected {width}")
        for out_j, j in enumerate(feature_cols):
            cell = row[j].strip()
            try:
                values[i, out_j] = float(cell)
            except ValueError:
                raise InputError(
                    f"{path}: non-numeric value {cell!r} at row {line}, column {header[j]}"
                ) from None
        if label_idx is not None:
            raw_labels.append(row[label_idx].strip())

    labels, class_names = (None, None)
    if label_idx is not None:
        labels, class_names = _remap_labels(raw_labels)
    return DataMatrix(values, labels, tuple(header[j] for j in feature_cols), class_names)


def write_csv(X: DataMatrix, path: Union[str, os.PathLike], label_name: str = "label") -> None:
    """Write ``X`` with a header line; floats use ``repr`` so they round-trip exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = list(X.feature_ids)
        if X.labels is not None:
            header.append(label_name)
        writer.writerow(header)
        for i in range(X.n_samples):
            row = [repr(float(v)) for v in X.values[i]]
            if X.labels is not None:
                row.append(str(int(X.labels[i])))
            writer.writerow(row)


def zscore_normalize(X: DataMatrix) -> DataMatrix:
    """Center every column and scale non-constant columns to unit population std."""
    v = X.values
    centered = v - v.mean(axis=0)
    std = centered.std(axis=0)
    # constant columns become exactly zero; ptp guards against rounding noise in std
    keep = (np.ptp(v, axis=0) > 0) & (std > 0)
    out = np.zeros_like(v)
    out[:, keep] = centered[:, keep] / std[keep]
    return X.with_values(out)


def minmax_normalize(X: DataMatrix) -> DataMatrix:
    v = X.values
    lo = v.min(axis=0)
    span = v.max(axis=0) - lo
    out = np.zeros_like(v)
    keep = span > 0
    out[:, keep] = (v[:, keep] - lo[keep]) / span[keep]
    return X.with_values(out)


NORMALIZERS = {
    "zscore": zscore_normalize,
    "minmax": minmax_normalize,
    "none": lambda X: X,
}


def normalize(X: DataMatrix, method: str = "zscore") -> DataMatrix:
    try:
        return NORMALIZERS[method](X)
    except KeyError:
        raise InputError(f"unknown normalization {method!r}; choose from {sorted(NORMALIZERS)}") from None
