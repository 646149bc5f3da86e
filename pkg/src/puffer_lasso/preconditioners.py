"""The Puffer preconditioning transforms and the row-space map.

Three left-preconditioners built from the SVD X = U diag(d) V':

  puffer         F = U D^-1 U', for n > p full-column-rank designs;
                 F X = U V' has orthonormal columns.
  puffer_scaled  the same transform applied to X N, where N is the
                 diagonal right-scaling with N_jj = sqrt(nu_j) and nu the
                 diagonal of (X'X)^-1; aligns penalty strength with the
                 coefficient standard errors.
  puffer_tau     F_tau = U (D^2 + tau I)^-1/2 U', for p >= n designs;
                 bridges the penalized fit to ridge regression.

Only left multiplications are used: rotating the columns instead would
change the basis the penalty acts in. F is never materialized as an
n x n matrix; it is applied through its factors, which is the same map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DataError, RankError


@dataclass(frozen=True)
class PreconditionedPair:
    """Transformed design and response plus the transform that made them."""

    x_tilde: np.ndarray
    y_tilde: np.ndarray
    transform: str  # "puffer", "puffer_scaled", or "puffer_tau"
    tau: float | None = None
    n_diag: np.ndarray | None = None


def puffer(x, y) -> PreconditionedPair:
    """Left-precondition (X, Y) -> (U V', U D^-1 U' Y) for n > p."""
    m = linalg.as_matrix(x)
    n, p = m.shape
    v = linalg.as_vector(y, n)
    if n <= p:
        raise RankError(f"puffer requires n > p, got n={n}, p={p}")
    f = linalg.svd(m, "skinny")
    linalg.require_full_column_rank(f)
    x_tilde = f.u @ f.v.T
    y_tilde = f.u @ ((f.u.T @ v) / f.d)
    return PreconditionedPair(x_tilde, y_tilde, "puffer")


def scaling_matrix(x) -> np.ndarray:
    """Diagonal of the right-scaling N: N_jj = sqrt of [(X'X)^-1]_jj."""
    return np.sqrt(linalg.gram_inverse_diagonal(x))


def puffer_scaled(x, y) -> PreconditionedPair:
    """Scaled transform: Puffer applied to X N, recording the N diagonal."""
    m = linalg.as_matrix(x)
    n_diag = scaling_matrix(m)
    pair = puffer(m * n_diag, y)
    return PreconditionedPair(
        pair.x_tilde, pair.y_tilde, "puffer_scaled", n_diag=n_diag
    )


def puffer_tau(x, y, tau: float) -> PreconditionedPair:
    """Generalized transform F_tau = U (D^2 + tau I)^-1/2 U' for p >= n.

    tau = 0 additionally requires full row rank; a numerically tiny
    singular value then raises rather than being regularized silently.
    """
    m = linalg.as_matrix(x)
    n, p = m.shape
    v = linalg.as_vector(y, n)
    if p < n:
        raise DataError(f"puffer_tau requires p >= n, got n={n}, p={p}")
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    f = linalg.svd(m, "skinny")  # U is n x n here
    if tau == 0.0:
        linalg.require_full_row_rank(f)
    w = 1.0 / np.sqrt(np.square(f.d) + tau)
    x_tilde = (f.u * (w * f.d)) @ f.v.T
    y_tilde = (f.u * w) @ (f.u.T @ v)
    return PreconditionedPair(x_tilde, y_tilde, "puffer_tau", tau=tau)


def project_rowspace(x, v, tau: float) -> np.ndarray:
    """Apply X'(XX' + tau I)^-1 X to v; at tau = 0 this projects onto the
    row space of X (and requires it to be full)."""
    m = linalg.as_matrix(x)
    n, p = m.shape
    vec = linalg.as_vector(v, p)
    if p < n:
        raise DataError(f"project_rowspace requires p >= n, got n={n}, p={p}")
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    if tau == 0.0:
        linalg.require_full_row_rank(linalg.svd(m, "skinny"))
    w = np.linalg.solve(m @ m.T + tau * np.eye(n), m @ vec)
    return m.T @ w


def ridge_via_precond(x, y, tau: float) -> np.ndarray:
    """Ridge coefficients computed as (F_tau X)' F_tau Y.

    Algebraically identical to estimators.ridge on the original data;
    kept as a separate route so the identity can be tested.
    """
    pair = puffer_tau(x, y, tau)
    return pair.x_tilde.T @ pair.y_tilde
