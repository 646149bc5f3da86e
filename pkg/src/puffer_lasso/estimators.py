"""Classical estimators and marginal inference: OLS, ridge, Z statistics.

The Z statistic for coordinate j is sqrt(n) * beta_ols_j divided by
sigma * sqrt(nu_j) with nu the diagonal of (X'X)^-1, and the two-sided
marginal p-value is 2 * (1 - Phi(|Z_j|)). The normal CDF is evaluated
through erfc, which keeps the absolute error far below 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DegreesOfFreedomError, RankError


@dataclass(frozen=True)
class InferenceResult:
    """OLS coefficients with their Z statistics and marginal p-values."""

    beta_ols: np.ndarray
    z_stats: np.ndarray
    p_values: np.ndarray
    sigma: float
    sigma_source: str  # "user_supplied" or "residual_estimate"


def ols(x, y) -> np.ndarray:
    """Least-squares coefficients (X'X)^-1 X'Y for full-rank X with n > p."""
    m = linalg.as_matrix(x)
    n, p = m.shape
    v = linalg.as_vector(y, n)
    if n <= p:
        raise RankError(f"ols requires n > p, got n={n}, p={p}")
    f = linalg.svd(m, "skinny")
    linalg.require_full_column_rank(f)
    return f.v @ ((f.u.T @ v) / f.d)


def ridge(x, y, tau: float) -> np.ndarray:
    """Ridge coefficients (X'X + tau I)^-1 X'Y; tau=0 is the Moore-Penrose fit.

    For tau = 0 the minimum-l2-norm least-squares solution is returned,
    which interpolates Y whenever X has full row rank. Rank deficiency is
    covered by the pseudoinverse, so no error is raised.
    """
    m = linalg.as_matrix(x)
    v = linalg.as_vector(y, m.shape[0])
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    if tau == 0.0:
        beta, *_ = np.linalg.lstsq(m, v, rcond=None)
        return beta
    p = m.shape[1]
    return np.linalg.solve(m.T @ m + tau * np.eye(p), m.T @ v)


def z_stats(x, y, sigma: float) -> np.ndarray:
    """Classical test statistics sqrt(n) * beta_j / sqrt(sigma^2 * nu_j)."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    m = linalg.as_matrix(x)
    n = m.shape[0]
    beta = ols(m, y)
    nu = linalg.gram_inverse_diagonal(m)
    return math.sqrt(n) * beta / (sigma * np.sqrt(nu))


def normal_cdf(t: float) -> float:
    """Standard normal CDF via erfc."""
    return 0.5 * math.erfc(-t / math.sqrt(2.0))


def two_sided_p(z: float) -> float:
    """2 * (1 - Phi(|z|)), simplified to erfc(|z| / sqrt(2))."""
    return math.erfc(abs(z) / math.sqrt(2.0))


def p_values(z) -> np.ndarray:
    """Two-sided marginal p-values for a vector of Z statistics."""
    zv = linalg.as_vector(z)
    return np.array([two_sided_p(float(t)) for t in zv])


def sigma_hat(x, y) -> float:
    """Residual noise-scale estimate sqrt(RSS / (n - p)) from the OLS fit.

    Returns exactly 0.0 when Y lies in the column span (a degenerate fit
    the caller should treat as such); residual norms at the rounding
    level, below max(n, p) * eps * ||Y||, count as in-span.
    """
    m = linalg.as_matrix(x)
    n, p = m.shape
    if n <= p + 1:
        raise DegreesOfFreedomError(
            f"sigma_hat requires n > p + 1, got n={n}, p={p}"
        )
    v = linalg.as_vector(y, n)
    resid = v - m @ ols(m, v)
    norm = float(np.linalg.norm(resid))
    if norm <= max(n, p) * linalg.EPS * float(np.linalg.norm(v)):
        return 0.0
    return norm / math.sqrt(n - p)


def inference(x, y, sigma: float | None = None) -> InferenceResult:
    """Assemble OLS coefficients, Z statistics and p-values.

    sigma=None estimates the noise scale from residuals; the choice is
    recorded in sigma_source.
    """
    if sigma is None:
        sigma_used = sigma_hat(x, y)
        source = "residual_estimate"
    else:
        sigma_used = float(sigma)
        source = "user_supplied"
    z = z_stats(x, y, sigma_used)
    return InferenceResult(
        beta_ols=ols(x, y),
        z_stats=z,
        p_values=p_values(z),
        sigma=sigma_used,
        sigma_source=source,
    )
