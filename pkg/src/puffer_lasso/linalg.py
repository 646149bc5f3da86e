"""Dense linear-algebra kernels: SVD, numerical rank, Gram pseudoinverse.

Everything downstream (preconditioners, estimators, the solver) consumes
these routines. Matrices are plain 2-D float64 numpy arrays; all
operations are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericalError, RankError

EPS = float(np.finfo(np.float64).eps)


def as_matrix(x) -> np.ndarray:
    """Validate and return a 2-D float64 matrix with finite entries."""
    m = np.asarray(x, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise DataError(f"expected a nonempty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DataError("matrix contains NaN or Inf entries")
    return m


def as_vector(y, length: int | None = None) -> np.ndarray:
    """Validate and return a 1-D float64 vector with finite entries."""
    v = np.asarray(y, dtype=np.float64).reshape(-1)
    if v.size == 0:
        raise DataError("expected a nonempty vector")
    if length is not None and v.size != length:
        raise DataError(f"expected vector of length {length}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise DataError("vector contains NaN or Inf entries")
    return v


@dataclass(frozen=True)
class SvdFactors:
    """Factors X = U diag(d) V' with d nonincreasing and nonnegative.

    ``skinny`` mode keeps k = min(n, p) columns in both U and V; ``full``
    mode carries the complete orthogonal bases (U is n x n, V is p x p)
    while d still lists the min(n, p) singular values.
    """

    u: np.ndarray
    d: np.ndarray
    v: np.ndarray
    mode: str
    rank_tol: float

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape[0], self.v.shape[0]

    def reconstruct(self) -> np.ndarray:
        """Multiply the factors back together."""
        k = self.d.size
        return (self.u[:, :k] * self.d) @ self.v[:, :k].T


def svd(x, mode: str = "skinny") -> SvdFactors:
    """Singular value decomposition of a dense matrix.

    mode="skinny" returns n x k and p x k factors with k = min(n, p);
    mode="full" returns complete square bases. Raises NumericalError if
    the underlying iteration fails to converge (never silent NaN).
    """
    if mode not in ("skinny", "full"):
        raise ValueError(f"mode must be 'skinny' or 'full', got {mode!r}")
    m = as_matrix(x)
    try:
        u, d, vt = np.linalg.svd(m, full_matrices=(mode == "full"))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed to converge: {exc}") from exc
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(d))):
        raise NumericalError("SVD produced non-finite factors")
    n, p = m.shape
    tol = max(n, p) * EPS * (float(d[0]) if d.size else 0.0)
    return SvdFactors(u=u, d=d, v=vt.T, mode=mode, rank_tol=tol)


def rank_of(f: SvdFactors) -> int:
    """Numerical rank: count of singular values above f.rank_tol."""
    return int(np.count_nonzero(f.d > f.rank_tol))


def require_full_column_rank(f: SvdFactors) -> None:
    """Raise RankError naming the offending singular value if rank < p."""
    p = f.v.shape[0]
    r = rank_of(f)
    if r < p:
        offender = float(f.d[r]) if r < f.d.size else 0.0
        raise RankError(
            f"matrix is column-rank deficient: rank {r} < {p} columns "
            f"(singular value {offender:.3e} <= tol {f.rank_tol:.3e})"
        )


def require_full_row_rank(f: SvdFactors) -> None:
    """Raise RankError naming the offending singular value if rank < n."""
    n = f.u.shape[0]
    r = rank_of(f)
    if r < n:
        offender = float(f.d[r]) if r < f.d.size else 0.0
        raise RankError(
            f"matrix is row-rank deficient: rank {r} < {n} rows "
            f"(singular value {offender:.3e} <= tol {f.rank_tol:.3e})"
        )


def pseudoinverse_gram(x) -> np.ndarray:
    """Moore-Penrose pseudoinverse of X'X, computed as V diag(d^-2) V'.

    Singular values at or below the rank tolerance are zeroed rather than
    inverted, so rank deficiency is handled without error.
    """
    f = svd(x, "skinny")
    inv2 = np.zeros_like(f.d)
    keep = f.d > f.rank_tol
    inv2[keep] = 1.0 / np.square(f.d[keep])
    return (f.v * inv2) @ f.v.T


def gram_inverse_diagonal(x) -> np.ndarray:
    """Diagonal of (X'X)^-1 for a full-column-rank design with n > p.

    Entry j is sum_k V_jk^2 / d_k^2; strictly positive whenever X has
    full column rank.
    """
    m = as_matrix(x)
    n, p = m.shape
    if n <= p:
        raise RankError(f"gram_inverse_diagonal requires n > p, got n={n}, p={p}")
    f = svd(m, "skinny")
    require_full_column_rank(f)
    return np.square(f.v) @ (1.0 / np.square(f.d))
