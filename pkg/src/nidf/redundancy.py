"""Pairwise feature-redundancy matrices with a positive-semidefinite repair."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .data import DataMatrix
from .errors import InputError, NumericError


@dataclass(frozen=True)
class RedundancyMatrix:
    values: np.ndarray
    view_tag: str = "original"
    psd_repaired: bool = False
    min_eig_before: float = float("nan")


def abs_correlation(X: DataMatrix, view_tag: str = "original") -> RedundancyMatrix:
    """``|pearson(f_p, f_q)|`` for every feature pair; constant columns are uncorrelated."""
    F = X.values - X.values.mean(axis=0)
    norms = np.sqrt(np.einsum("ij,ij->j", F, F))
    constant = np.ptp(X.values, axis=0) == 0
    safe = np.where(constant, 1.0, norms)
    Z = F / safe
    A = np.abs(Z.T @ Z)
    A[constant, :] = 0.0
    A[:, constant] = 0.0
    np.clip(A, 0.0, 1.0, out=A)
    A = 0.5 * (A + A.T)
    np.fill_diagonal(A, 1.0)
    return RedundancyMatrix(A, view_tag)


def psd_repair(A: RedundancyMatrix, eps: float = 1e-8) -> RedundancyMatrix:
    """Clip negative eigenvalues to zero, then add ``eps`` to the diagonal."""
    if eps < 0:
        raise InputError(f"eps must be nonnegative, got {eps}")
    M = np.asarray(A.values, dtype=np.float64)
    if np.max(np.abs(M - M.T), initial=0.0) > 1e-10:
        raise InputError("redundancy matrix is not symmetric")
    M = 0.5 * (M + M.T)
    try:
        evals, evecs = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed for {M.shape} redundancy matrix: {exc}") from exc
    fixed = (evecs * np.maximum(evals, 0.0)) @ evecs.T
    fixed = 0.5 * (fixed + fixed.T) + eps * np.eye(M.shape[0])
    return replace(A, values=fixed, psd_repaired=True, min_eig_before=float(evals[0]))


def redundancy_matrix(X: DataMatrix, view_tag: str = "original", eps: float = 1e-8) -> RedundancyMatrix:
    return psd_repair(abs_correlation(X, view_tag), eps)
