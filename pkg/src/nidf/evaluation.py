"""Clustering-based evaluation of a feature ranking.

k-means (k-means++ seeding, Lloyd iterations) is run on the top-``m``
features for every ``m`` in a grid, and each run is scored against the true
labels with clustering accuracy (ACC, optimal one-to-one label matching) and
normalized mutual information (NMI, normalized by the larger entropy).
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from .data import DataMatrix
from .errors import InputError
from .fusion import rank_features


@dataclass(frozen=True)
class KMeansConfig:
    """``n_clusters=None`` means: use the number of classes in the labels."""

    n_clusters: Optional[int] = None
    restarts: int = 20
    max_iter: int = 300
    seed: int = 0
    init: str = "kmeanspp"

    def __post_init__(self):
        if self.restarts < 1:
            raise InputError(f"restarts must be >= 1, got {self.restarts}")
        if self.n_clusters is not None and self.n_clusters < 1:
            raise InputError(f"n_clusters must be >= 1, got {self.n_clusters}")
        if self.init != "kmeanspp":
            raise InputError(f"unsupported init {self.init!r}")


def child_rng(*key: int) -> np.random.Generator:
    """Independent generator for an integer key such as (seed, m_index, restart)."""
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in key]))


def _kmeanspp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    closest = cdist(X, centers[:1], "sqeuclidean").ravel()
    for j in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = int(np.searchsorted(np.cumsum(closest), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))
        centers[j] = X[idx]
        np.minimum(closest, cdist(X, centers[j : j + 1], "sqeuclidean").ravel(), out=closest)
    return centers


def lloyd(X: np.ndarray, k: int, rng: np.random.Generator, max_iter: int = 300):
    """One seeded k-means run. Returns (labels, inertia)."""
    X = np.asarray(X, dtype=np.float64)
    centers = _kmeanspp(X, k, rng)
    labels = None
    for _ in range(max_iter):
        dist = cdist(X, centers, "sqeuclidean")
        new_labels = dist.argmin(axis=1)
        point_cost = dist[np.arange(X.shape[0]), new_labels]
        counts = np.bincount(new_labels, minlength=k)
        while np.any(counts == 0):
            # re-seed an empty cluster at the point worst served by its center,
            # never emptying a singleton cluster in the process
            j = int(np.flatnonzero(counts == 0)[0])
            movable = counts[new_labels] > 1
            far = int(np.where(movable, point_cost, -1.0).argmax())
            counts[new_labels[far]] -= 1
            counts[j] += 1
            new_labels[far] = j
            point_cost[far] = 0.0
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            centers[j] = X[labels == j].mean(axis=0)
    inertia = float(((X - centers[labels]) ** 2).sum())
    return labels, inertia


def kmeans(X: np.ndarray, cfg: KMeansConfig):
    """Best-of-``restarts`` k-means by within-cluster sum of squares."""
    X = np.asarray(X, dtype=np.float64)
    k = cfg.n_clusters
    if k is None:
        raise InputError("n_clusters must be set for kmeans")
    if k > X.shape[0]:
        raise InputError(f"n_clusters={k} exceeds n_samples={X.shape[0]}")
    best = None
    for r in range(cfg.restarts):
        labels, inertia = lloyd(X, k, child_rng(cfg.seed, r), cfg.max_iter)
        if best is None or inertia < best[1]:
            best = (labels, inertia)
    return best


def _check_pair(true_labels, pred_labels):
    t = np.asarray(true_labels).ravel()
    p = np.asarray(pred_labels).ravel()
    if t.shape != p.shape:
        raise InputError(f"label vectors differ in length: {t.size} vs {p.size}")
    if t.size == 0:
        raise InputError("empty label vectors")
    return t, p


def contingency(true_labels, pred_labels) -> np.ndarray:
    t, p = _check_pair(true_labels, pred_labels)
    _, ti = np.unique(t, return_inverse=True)
    _, pi = np.unique(p, return_inverse=True)
    C = np.zeros((ti.max() + 1, pi.max() + 1), dtype=np.int64)
    np.add.at(C, (ti, pi), 1)
    return C


def acc(true_labels, pred_labels) -> float:
    """Fraction of samples correct under the best one-to-one cluster-to-class map."""
    C = contingency(true_labels, pred_labels)
    rows, cols = linear_sum_assignment(-C)
    return float(C[rows, cols].sum()) / C.sum()


def _entropy(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def nmi(true_labels, pred_labels) -> float:
    """Mutual information over ``max(H(true), H(pred))``, natural log."""
    C = contingency(true_labels, pred_labels)
    n = C.sum()
    joint = C / n
    pt = joint.sum(axis=1)
    pp = joint.sum(axis=0)
    h = max(_entropy(pt), _entropy(pp))
    if h == 0.0:
        # both partitions are a single block, hence identical
        return 1.0
    nz = joint > 0
    mi = float((joint[nz] * np.log(joint[nz] / np.outer(pt, pp)[nz])).sum())
    return min(max(mi / h, 0.0), 1.0)


def default_m_grid(d: int) -> List[int]:
    """10, 20, ..., 100 clipped to ``d`` (just ``[d]`` when ``d < 10``)."""
    grid = [m for m in range(10, 101, 10) if m <= d]
    return grid or [d]


@dataclass
class EvalReport:
    per_m: List[dict]
    acc_avg: float
    nmi_avg: float
    method_id: str = ""
    dataset_id: str = ""
    runtime_ms: Optional[int] = None

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate_selection(
    X: DataMatrix,
    score,
    m_grid: Optional[Sequence[int]] = None,
    kcfg: KMeansConfig = KMeansConfig(),
    method_id: str = "",
    dataset_id: str = "",
    jobs: int = 1,
) -> EvalReport:
    """ACC/NMI of k-means on the top-m features, averaged over restarts and the m-grid.

    Every (m, restart) cell draws from its own child generator keyed by
    ``(seed, m_index, restart)``, so the report does not depend on ``jobs``.
    """
    if X.labels is None:
        raise InputError("labels required for eval")
    start = time.perf_counter()
    m_grid = list(default_m_grid(X.n_features) if m_grid is None else m_grid)
    if not m_grid or max(m_grid) > X.n_features or min(m_grid) < 1:
        raise InputError(f"m-grid {m_grid} must be nonempty with values in [1, {X.n_features}]")
    k = kcfg.n_clusters or X.n_classes
    if k > X.n_samples:
        raise InputError(f"n_clusters={k} exceeds n_samples={X.n_samples}")

    def cell(args):
        mi, r, cols = args
        pred, _ = lloyd(X.values[:, cols], k, child_rng(kcfg.seed, mi, r), kcfg.max_iter)
        return acc(X.labels, pred), nmi(X.labels, pred)

    tasks = []
    for mi, m in enumerate(m_grid):
        cols = rank_features(score, m)
        tasks.extend((mi, r, cols) for r in range(kcfg.restarts))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(cell, tasks))
    else:
        results = [cell(t) for t in tasks]

    res = np.array(results).reshape(len(m_grid), kcfg.restarts, 2)
    per_m = [
        {
            "m": int(m),
            "acc_mean": float(res[i, :, 0].mean()),
            "acc_std": float(res[i, :, 0].std()),
            "nmi_mean": float(res[i, :, 1].mean()),
            "nmi_std": float(res[i, :, 1].std()),
        }
        for i, m in enumerate(m_grid)
    ]
    return EvalReport(
        per_m=per_m,
        acc_avg=float(np.mean([row["acc_mean"] for row in per_m])),
        nmi_avg=float(np.mean([row["nmi_mean"] for row in per_m])),
        method_id=method_id,
        dataset_id=dataset_id,
        runtime_ms=int(round((time.perf_counter() - start) * 1000)),
    )
