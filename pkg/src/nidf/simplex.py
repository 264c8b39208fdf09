"""Euclidean projection onto the probability simplex and a simplex-constrained QP solver."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import InputError


def project_simplex(v) -> np.ndarray:
    """``argmin_{x >= 0, sum(x) = 1} ||x - v||^2`` by the sort-and-threshold rule."""
    v = np.asarray(v, dtype=np.float64)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def simplex_vertex(c) -> np.ndarray:
    """One-hot vector at the first maximizer of ``c``."""
    c = np.asarray(c, dtype=np.float64)
    x = np.zeros(c.size)
    x[int(np.argmax(c))] = 1.0
    return x


@dataclass(frozen=True)
class QPConfig:
    tol: float = 1e-8
    max_iter: int = 5000
    power_iters: int = 50

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError(f"qp tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise InputError(f"qp max_iter must be >= 1, got {self.max_iter}")


class QPResult(NamedTuple):
    x: np.ndarray
    n_iter: int
    converged: bool


def spectral_norm_estimate(Q: np.ndarray, n_iter: int = 50) -> float:
    """Power-iteration estimate of ``||Q||_2`` from a fixed start, floored at 1e-12."""
    n = Q.shape[0]
    x = np.ones(n) + np.arange(n) / max(n, 1)
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(n_iter):
        y = Q @ x
        est = np.linalg.norm(y)
        if est == 0.0:
            break
        x = y / est
    return max(float(est), 1e-12)


def qp_objective(Q: np.ndarray, c: np.ndarray, x: np.ndarray) -> float:
    return float(x @ Q @ x - c @ x)


def solve_simplex_qp(Q, c, cfg: QPConfig = QPConfig(), x0: Optional[np.ndarray] = None) -> QPResult:
    """Minimize ``x^T Q x - c^T x`` over the probability simplex.

    Projected gradient descent with step ``1 / (2 L)``, ``L`` a power-iteration
    estimate of ``||Q||``. Starts from the uniform vector unless ``x0`` is
    given. Stops when the step norm drops to ``cfg.tol``; otherwise the best
    iterate seen is returned with ``converged=False``.
    """
    Q = np.asarray(Q, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    n = c.size
    if Q.shape != (n, n):
        raise InputError(f"Q has shape {Q.shape}, expected {(n, n)}")
    x = np.full(n, 1.0 / n) if x0 is None else project_simplex(x0)
    norm = spectral_norm_estimate(Q, cfg.power_iters)
    if norm <= 1e-12:
        return QPResult(simplex_vertex(c), 0, True)
    step = 1.0 / (2.0 * norm)

    best_x, best_f = x, qp_objective(Q, c, x)
    for it in range(1, cfg.max_iter + 1):
        x_new = project_simplex(x - step * (2.0 * (Q @ x) - c))
        moved = np.linalg.norm(x_new - x)
        x = x_new
        f = qp_objective(Q, c, x)
        if f <= best_f:
            best_x, best_f = x, f
        if moved <= cfg.tol:
            return QPResult(best_x, it, True)
    return QPResult(best_x, cfg.max_iter, False)
