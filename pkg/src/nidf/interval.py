"""Neighborhood-interval approximation of a dataset.

Each sample (row) is replaced by a band ``mean +/- c * std`` computed over
its k-NN neighborhood; the same is done for features (columns). The lower
and upper band edges give four new datasets of the original shape.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from .data import DataMatrix
from .errors import InputError
from .neighborhood import knn

VIEW_TAGS = ("SampleLow", "SampleUp", "FeatureLow", "FeatureUp")
SCALE_RULES = ("sigma_over_alpha", "alpha_sigma")


@dataclass(frozen=True)
class IntervalConfig:
    """Band construction parameters.

    ``k=0`` is accepted only together with ``include_self`` and yields the
    degenerate self-only neighborhood, for which every band collapses onto
    the data.
    """

    k: int = 15
    alpha: float = 3.0
    scale_rule: str = "sigma_over_alpha"
    include_self: bool = True

    def __post_init__(self):
        if self.k < 0 or (self.k == 0 and not self.include_self):
            raise InputError(f"interval k must be >= 1, got {self.k}")
        if not self.alpha > 0:
            raise InputError(f"alpha must be positive, got {self.alpha}")
        if self.scale_rule not in SCALE_RULES:
            raise InputError(f"scale_rule must be one of {SCALE_RULES}, got {self.scale_rule!r}")

    @property
    def spread(self) -> float:
        return 1.0 / self.alpha if self.scale_rule == "sigma_over_alpha" else self.alpha


def _row_bands(points: np.ndarray, cfg: IntervalConfig) -> Tuple[np.ndarray, np.ndarray]:
    n = points.shape[0]
    if cfg.k >= n:
        raise InputError(f"interval k={cfg.k} needs at least {cfg.k + 1} points, got {n}")
    nbrs = knn(points, cfg.k)
    if cfg.include_self:
        nbrs = np.hstack([np.arange(n)[:, None], nbrs])
    hood = points[nbrs]  # (n, |N|, dim)
    mu = hood.mean(axis=1)
    sigma = hood.std(axis=1)
    half = cfg.spread * sigma
    return mu - half, mu + half


def sample_interval(X: DataMatrix, cfg: IntervalConfig = IntervalConfig()):
    """(SampleLow, SampleUp): bands over each sample's row neighborhood."""
    low, up = _row_bands(X.values, cfg)
    return X.with_values(low), X.with_values(up)


def feature_interval(X: DataMatrix, cfg: IntervalConfig = IntervalConfig()):
    """(FeatureLow, FeatureUp): bands over each feature's column neighborhood."""
    if cfg.k >= X.n_features:
        raise InputError(
            f"feature interval needs k <= n_features - 1; got k={cfg.k}, n_features={X.n_features}"
        )
    low, up = _row_bands(X.values.T, cfg)
    return X.with_values(low.T), X.with_values(up.T)


@dataclass(frozen=True)
class IntervalViews:
    sample_low: DataMatrix
    sample_up: DataMatrix
    feature_low: DataMatrix
    feature_up: DataMatrix

    tags = VIEW_TAGS

    def __iter__(self) -> Iterator[DataMatrix]:
        return iter((self.sample_low, self.sample_up, self.feature_low, self.feature_up))

    def __len__(self) -> int:
        return 4

    def __getitem__(self, i: int) -> DataMatrix:
        return tuple(self)[i]


def build_views(X: DataMatrix, cfg: IntervalConfig = IntervalConfig()) -> IntervalViews:
    """The four interval views in fixed order (SampleLow, SampleUp, FeatureLow, FeatureUp)."""
    s_low, s_up = sample_interval(X, cfg)
    f_low, f_up = feature_interval(X, cfg)
    return IntervalViews(s_low, s_up, f_low, f_up)
