"""Synthetic labeled data with a known set of informative features."""
from __future__ import annotations

import numpy as np

from .data import DataMatrix


def informative_clusters(
    n_samples: int = 300,
    n_features: int = 50,
    n_informative: int = 5,
    n_clusters: int = 3,
    separation: float = 3.0,
    seed: int = 0,
):
    """Gaussian clusters that differ only on ``n_informative`` hidden columns.

    All columns carry unit-variance Gaussian noise. On informative column
    ``j`` the cluster means are ``separation * cos(2 pi c / n_clusters + phi_j)``
    with phases ``phi_j`` spread evenly over ``[0, pi)``, so every informative
    column separates the clusters equally well while no two of them are
    exact copies. The informative columns are placed at random positions.

    Returns ``(DataMatrix, informative_indices)``.
    """
    rng = np.random.default_rng(seed)
    labels = np.arange(n_samples) % n_clusters
    phases = np.arange(n_informative) * np.pi / n_informative
    angles = 2 * np.pi * np.arange(n_clusters)[:, None] / n_clusters + phases[None, :]
    means = separation * np.cos(angles)
    X = rng.normal(size=(n_samples, n_features))
    informative = np.sort(rng.permutation(n_features)[:n_informative])
    X[:, informative] += means[labels]
    return DataMatrix(X, labels), informative
