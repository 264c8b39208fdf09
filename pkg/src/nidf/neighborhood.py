"""Brute-force k-nearest neighbors, heat-kernel affinity and graph Laplacian.

Distances are computed densely (O(n^2) memory), which is fine for the
desk-scale datasets this package targets (n up to roughly 10^4).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InputError, NumericError


def squared_distances(points: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances.

    Differences are formed explicitly (no Gram-matrix shortcut) so equal
    distances compare equal and the tie rule in :func:`knn` is exact.
    """
    points = np.asarray(points, dtype=np.float64)
    return cdist(points, points, "sqeuclidean")


def knn(points: np.ndarray, k: int, metric: str = "euclidean") -> np.ndarray:
    """Indices of the ``k`` nearest other points for every row of ``points``.

    Ties in distance are broken by ascending index, so the result is fully
    deterministic.
    """
    if metric != "euclidean":
        raise InputError(f"unsupported metric {metric!r}")
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if k < 0 or k >= n:
        raise InputError(f"k must satisfy 0 <= k <= n - 1 = {n - 1}, got {k}")
    if k == 0:
        return np.empty((n, 0), dtype=np.int64)
    dist = squared_distances(points)
    np.fill_diagonal(dist, np.inf)
    # stable sort keeps ascending index among equal distances
    order = np.argsort(dist, axis=1, kind="stable")
    return order[:, :k].astype(np.int64)


def heat_affinity(
    points: np.ndarray,
    neighbors: np.ndarray,
    bandwidth: Union[float, str] = "auto",
) -> np.ndarray:
    """Symmetric heat-kernel affinity on the OR-symmetrized k-NN graph.

    ``S_ij = exp(-||x_i - x_j||^2 / (2 t^2))`` for connected pairs. With
    ``bandwidth="auto"``, ``t`` is the mean Euclidean distance over all listed
    (i, neighbor) pairs.
    """
    points = np.asarray(points, dtype=np.float64)
    neighbors = np.asarray(neighbors, dtype=np.int64)
    n = points.shape[0]
    rows = np.repeat(np.arange(n), neighbors.shape[1])
    cols = neighbors.ravel()
    diff = points[rows] - points[cols]
    sq = np.einsum("ij,ij->i", diff, diff)

    if isinstance(bandwidth, str):
        if bandwidth != "auto":
            raise InputError(f"bandwidth must be a positive number or 'auto', got {bandwidth!r}")
        t = float(np.sqrt(sq).mean()) if sq.size else 1.0
        if t <= 0:
            t = 1.0  # every neighbor coincides; any t gives weight 1
    else:
        t = float(bandwidth)
        if not t > 0:
            raise InputError(f"bandwidth must be positive, got {bandwidth}")

    S = np.zeros((n, n))
    w = np.exp(-sq / (2.0 * t * t))
    S[rows, cols] = w
    S[cols, rows] = w
    np.fill_diagonal(S, 0.0)
    return S


def laplacian(S: np.ndarray):
    """Degree vector and unnormalized Laplacian ``L = diag(D) - S``."""
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InputError(f"affinity must be square, got shape {S.shape}")
    if np.max(np.abs(S - S.T), initial=0.0) > 1e-10:
        raise InputError("affinity matrix is not symmetric")
    D = S.sum(axis=1)
    return D, np.diag(D) - S


@dataclass(frozen=True)
class NeighborGraph:
    k: int
    neighbor_indices: np.ndarray
    affinity: np.ndarray
    degrees: np.ndarray
    laplacian: np.ndarray


def build_graph(points: np.ndarray, k: int = 5, bandwidth: Union[float, str] = "auto") -> NeighborGraph:
    """k-NN heat-kernel graph over the rows of ``points``."""
    points = np.asarray(points, dtype=np.float64)
    if k < 1:
        raise InputError(f"graph k must be >= 1, got {k}")
    nbrs = knn(points, k)
    S = heat_affinity(points, nbrs, bandwidth)
    D, L = laplacian(S)
    if not np.any(D > 0):
        raise NumericError("affinity graph has no edges with positive weight")
    return NeighborGraph(k, nbrs, S, D, L)
