"""Unsupervised per-feature scorers and their mapping to a common [0, 1] scale.

Three scorers are provided: Laplacian Score (lower raw = better), MCFS
(spectral embedding + L1 regression, higher = better) and plain variance
(higher = better). :func:`to_importance` turns any of them into a
higher-is-better vector in [0, 1].
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np
import scipy.linalg

from .data import DataMatrix
from .errors import InputError, NumericError
from .neighborhood import NeighborGraph, build_graph

ORIENTATION = {
    "lapscore": "lower_better",
    "mcfs": "higher_better",
    "variance": "higher_better",
}


@dataclass(frozen=True)
class FeatureScore:
    values: np.ndarray
    selector: str
    view_tag: str = "original"
    normalized: bool = True

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SelectorConfig:
    """Graph and scorer parameters.

    ``n_embed=None`` means: number of classes if the data carry labels, else 5.
    """

    graph_k: int = 5
    bandwidth: Union[float, str] = "auto"
    n_embed: Optional[int] = None
    gamma: float = 0.1
    lasso_tol: float = 1e-8
    lasso_max_sweeps: int = 10_000

    def resolve_n_embed(self, X: DataMatrix) -> int:
        if self.n_embed is not None:
            return self.n_embed
        return X.n_classes if X.n_classes is not None and X.n_classes >= 1 else 5


def laplacian_score(X: DataMatrix, g: NeighborGraph) -> np.ndarray:
    """Raw Laplacian Score per feature; constant features get the worst finite score."""
    D = g.degrees
    total = D.sum()
    if not total > 0:
        raise NumericError("Laplacian Score needs a graph with positive total degree")
    F = X.values
    F_tilde = F - (D @ F) / total
    num = np.einsum("ij,ij->j", F_tilde, g.laplacian @ F_tilde)
    den = np.einsum("ij,i,ij->j", F_tilde, D, F_tilde)
    degenerate = den < 1e-12
    scores = np.empty(F.shape[1])
    scores[~degenerate] = num[~degenerate] / den[~degenerate]
    worst = scores[~degenerate].max() if np.any(~degenerate) else 0.0
    scores[degenerate] = worst
    return scores


def _lasso_cd(G: np.ndarray, b: np.ndarray, gamma: float, tol: float, max_sweeps: int):
    """Cyclic coordinate descent for ``min_a ||y - X a||^2 + gamma ||a||_1``.

    Works in covariance form: ``G = X^T X`` and ``b = X^T y``.
    """
    d = G.shape[0]
    a = np.zeros(d)
    grad = b.copy()  # X^T (y - X a)
    diag = np.diag(G)
    thresh = gamma / 2.0
    for sweep in range(1, max_sweeps + 1):
        max_delta = 0.0
        for r in range(d):
            if diag[r] <= 0:
                continue
            rho = grad[r] + diag[r] * a[r]
            new = np.sign(rho) * max(abs(rho) - thresh, 0.0) / diag[r]
            delta = new - a[r]
            if delta != 0.0:
                grad -= delta * G[:, r]
                a[r] = new
                max_delta = max(max_delta, abs(delta))
        if max_delta < tol:
            return a, sweep, True
    return a, max_sweeps, False


def spectral_embedding(g: NeighborGraph, n_embed: int) -> np.ndarray:
    """The ``n_embed`` smallest nontrivial solutions of ``L y = lambda D y``."""
    n = g.laplacian.shape[0]
    if not 1 <= n_embed <= n - 1:
        raise InputError(f"n_embed must be in [1, {n - 1}], got {n_embed}")
    if np.any(g.degrees <= 0):
        raise NumericError("generalized eigenproblem needs every node degree > 0 (isolated node found)")
    try:
        _, vecs = scipy.linalg.eigh(g.laplacian, np.diag(g.degrees), subset_by_index=[1, n_embed])
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(f"generalized eigensolver failed for n={n}, n_embed={n_embed}: {exc}") from exc
    return vecs


def mcfs_score(
    X: DataMatrix,
    g: NeighborGraph,
    n_embed: int = 5,
    gamma: float = 0.1,
    tol: float = 1e-8,
    max_sweeps: int = 10_000,
) -> np.ndarray:
    """Raw MCFS score: max absolute L1-regression coefficient over embedding directions."""
    if not gamma > 0:
        raise InputError(f"gamma must be positive, got {gamma}")
    Y = spectral_embedding(g, n_embed)
    F = X.values
    G = F.T @ F
    scores = np.zeros(F.shape[1])
    for k in range(Y.shape[1]):
        coef, _, _ = _lasso_cd(G, F.T @ Y[:, k], gamma, tol, max_sweeps)
        np.maximum(scores, np.abs(coef), out=scores)
    return scores


def variance_score(X: DataMatrix) -> np.ndarray:
    return X.values.var(axis=0)


def to_importance(raw, orientation: str, selector: str = "custom", view_tag: str = "original") -> FeatureScore:
    """Orient so that higher is better and min-max scale into [0, 1].

    A constant input maps to the all-0.5 vector.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if orientation == "lower_better":
        raw = -raw
    elif orientation != "higher_better":
        raise InputError(f"unknown orientation {orientation!r}")
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        values = np.full(raw.shape, 0.5)
    else:
        values = (raw - lo) / (hi - lo)
    return FeatureScore(values, selector, view_tag, True)


def raw_scores(X: DataMatrix, selector: str, cfg: SelectorConfig = SelectorConfig()) -> np.ndarray:
    if selector == "variance":
        return variance_score(X)
    if selector not in ORIENTATION:
        raise InputError(f"unknown selector {selector!r}; choose from {sorted(ORIENTATION)}")
    g = build_graph(X.values, min(cfg.graph_k, X.n_samples - 1), cfg.bandwidth)
    if selector == "lapscore":
        return laplacian_score(X, g)
    return mcfs_score(X, g, cfg.resolve_n_embed(X), cfg.gamma, cfg.lasso_tol, cfg.lasso_max_sweeps)


def score_matrix(X: DataMatrix, selector: str, cfg: SelectorConfig = SelectorConfig(),
                 view_tag: str = "original") -> FeatureScore:
    """Run one selector on one dataset and return the normalized score."""
    return to_importance(raw_scores(X, selector, cfg), ORIENTATION[selector], selector, view_tag)


def score_views(views, selector: str, cfg: SelectorConfig = SelectorConfig(), jobs: int = 1) -> List[FeatureScore]:
    """Score each view independently, each on its own freshly built graph."""
    tags = getattr(views, "tags", tuple(f"view{i}" for i in range(len(views))))

    def run(i_view):
        i, view = i_view
        try:
            return score_matrix(view, selector, cfg, tags[i])
        except (InputError, NumericError) as exc:
            raise type(exc)(f"view {tags[i]}: {exc}") from exc

    items = list(enumerate(views))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, items))
    return [run(item) for item in items]
