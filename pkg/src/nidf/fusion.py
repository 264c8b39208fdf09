"""Multi-view score fusion by alternating minimization.

The fused score ``z`` and the view weights ``w`` both live on probability
simplices; ``lam`` balances redundancy against score. The objective is::

    J(lam, z, w) = lam^2 * sum_i w_i^2 z^T A_i z  -  lam * sum_i w_i z^T s_i

Each outer iteration updates ``lam`` in closed form, then ``z`` and ``w`` by
simplex-constrained QPs.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .errors import InputError
from .scorers import FeatureScore
from .simplex import QPConfig, solve_simplex_qp, simplex_vertex

DEGENERATE_CURVATURE = 1e-12


@dataclass(frozen=True)
class FusionConfig:
    outer_tol: float = 1e-6
    outer_max_iter: int = 100
    qp_tol: float = 1e-8
    qp_max_iter: int = 5000
    lambda_floor: float = 0.0

    def __post_init__(self):
        if not (self.outer_tol > 0 and self.qp_tol > 0):
            raise InputError("fusion tolerances must be positive")
        if self.outer_max_iter < 1 or self.qp_max_iter < 1:
            raise InputError("fusion iteration caps must be >= 1")
        if self.lambda_floor < 0:
            raise InputError(f"lambda_floor must be nonnegative, got {self.lambda_floor}")

    @property
    def qp(self) -> QPConfig:
        return QPConfig(tol=self.qp_tol, max_iter=self.qp_max_iter)


@dataclass
class FusionState:
    lam: float
    z: np.ndarray
    w: np.ndarray
    iteration: int = 0
    objective_history: List[float] = field(default_factory=list)
    lambda_history: List[float] = field(default_factory=list)
    converged: bool = False
    qp_failures: int = 0


def _as_arrays(A_list, s_list):
    A = [np.asarray(getattr(a, "values", a), dtype=np.float64) for a in A_list]
    s = [np.asarray(getattr(x, "values", x), dtype=np.float64) for x in s_list]
    if len(A) != len(s) or not A:
        raise InputError(f"need matching nonempty lists, got {len(A)} matrices and {len(s)} scores")
    d = s[0].size
    for a, x in zip(A, s):
        if a.shape != (d, d) or x.shape != (d,):
            raise InputError(f"shape mismatch: matrix {a.shape}, score {x.shape}, expected d={d}")
    return A, s


def objective(lam: float, z, w, A_list, s_list) -> float:
    A, s = _as_arrays(A_list, s_list)
    z = np.asarray(z, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if z.shape != s[0].shape or w.shape != (len(A),):
        raise InputError(f"z has shape {z.shape}, w has shape {w.shape}")
    quad = sum(wi * wi * (z @ Ai @ z) for wi, Ai in zip(w, A))
    lin = sum(wi * (z @ si) for wi, si in zip(w, s))
    return float(lam * lam * quad - lam * lin)


def aggregate(A_list, s_list, w):
    """``A = sum_i w_i^2 A_i`` and ``s = sum_i w_i s_i``."""
    A, s = _as_arrays(A_list, s_list)
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (len(A),):
        raise InputError(f"w has shape {w.shape}, expected ({len(A)},)")
    A_agg = sum(wi * wi * Ai for wi, Ai in zip(w, A))
    s_agg = sum(wi * si for wi, si in zip(w, s))
    return A_agg, s_agg


def update_lambda(z, A, s, lambda_floor: float = 0.0) -> float:
    """Closed-form minimizer ``z^T s / (2 z^T A z)``; ``lambda_floor`` when the curvature vanishes."""
    z = np.asarray(z, dtype=np.float64)
    curv = float(z @ A @ z)
    if curv < DEGENERATE_CURVATURE:
        return lambda_floor
    return float(z @ s) / (2.0 * curv)


def _block_qp(lam, Q, c, cfg: FusionConfig, x0=None):
    if lam <= 0:
        return simplex_vertex(c), True
    res = solve_simplex_qp(lam * Q, c, cfg.qp, x0)
    if not res.converged:
        warnings.warn(
            f"simplex QP (size {c.size}) did not converge in {cfg.qp_max_iter} iterations",
            RuntimeWarning,
            stacklevel=3,
        )
    return res.x, res.converged


def update_z(lam: float, A, s, cfg: FusionConfig = FusionConfig(), z0=None) -> np.ndarray:
    """Minimize ``lam z^T A z - z^T s`` on the simplex (LP vertex when ``lam == 0``)."""
    return _block_qp(lam, np.asarray(A, dtype=np.float64), np.asarray(s, dtype=np.float64), cfg, z0)[0]


def build_weight_system(z, A_list, s_list):
    """Diagonal ``H`` with ``H_ii = z^T A_i z`` and ``f_i = z^T s_i``, sized by view count."""
    A, s = _as_arrays(A_list, s_list)
    z = np.asarray(z, dtype=np.float64)
    H = np.diag([float(z @ Ai @ z) for Ai in A])
    f = np.array([float(z @ si) for si in s])
    return H, f


def update_w(lam: float, H, f, cfg: FusionConfig = FusionConfig(), w0=None) -> np.ndarray:
    """Minimize ``lam w^T H w - f^T w`` on the simplex."""
    return _block_qp(lam, np.asarray(H, dtype=np.float64), np.asarray(f, dtype=np.float64), cfg, w0)[0]


def run_nidf(A_list, s_list, cfg: FusionConfig = FusionConfig()):
    """Alternate lambda, z and w updates until lambda settles.

    Returns the fused score ``z`` (a simplex vector wrapped in a
    :class:`FeatureScore`) and the final :class:`FusionState`. The
    objective is recorded after every block update. The z and w solvers are
    warm-started from the current iterate so no block update can raise the
    objective.
    """
    A, s = _as_arrays(A_list, s_list)
    d, v = s[0].size, len(A)
    state = FusionState(lam=0.0, z=np.full(d, 1.0 / d), w=np.full(v, 1.0 / v))
    prev_lam = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        for it in range(1, cfg.outer_max_iter + 1):
            A_agg, s_agg = aggregate(A, s, state.w)
            state.lam = update_lambda(state.z, A_agg, s_agg, cfg.lambda_floor)
            state.objective_history.append(objective(state.lam, state.z, state.w, A, s))

            state.z, _ = _block_qp(state.lam, A_agg, s_agg, cfg, state.z)
            state.objective_history.append(objective(state.lam, state.z, state.w, A, s))

            if v > 1:
                H, f = build_weight_system(state.z, A, s)
                state.w, _ = _block_qp(state.lam, H, f, cfg, state.w)
            state.objective_history.append(objective(state.lam, state.z, state.w, A, s))

            state.iteration = it
            state.lambda_history.append(state.lam)
            if prev_lam is not None and abs(state.lam - prev_lam) / max(1.0, abs(prev_lam)) < cfg.outer_tol:
                state.converged = True
                break
            prev_lam = state.lam
    state.qp_failures = len(caught)
    selector = getattr(s_list[0], "selector", "custom")
    return FeatureScore(state.z.copy(), selector, "fused", normalized=False), state


def rank_features(z, m: int) -> np.ndarray:
    """Indices of the ``m`` largest entries of ``z``, descending, ties by ascending index."""
    z = np.asarray(getattr(z, "values", z), dtype=np.float64)
    if not 1 <= m <= z.size:
        raise InputError(f"m must be in [1, {z.size}], got {m}")
    return np.argsort(-z, kind="stable")[:m]
