"""Independent slow oracles used to check the library's fast paths.

Nothing here calls back into puffer_lasso or numpy.linalg: eigenvalues
come from cyclic Jacobi rotations, linear systems from Gauss-Jordan
elimination, integrals from composite Simpson, the normal CDF from a
Taylor series plus a Laplace continued fraction, and the Lasso from
subgradient descent and exact sign-pattern enumeration.
"""

from __future__ import annotations

import math

import numpy as np


def jacobi_eigenvalues(sym, max_sweeps: int = 200, tol: float = 1e-14) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(sym, dtype=np.float64)
    n = a.shape[0]
    scale = max(float(np.max(np.abs(a))), 1.0)
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off = max(off, abs(a[i, j]))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-300:
                    continue
                theta = 0.5 * math.atan2(2.0 * a[p, q], a[q, q] - a[p, p])
                c, s = math.cos(theta), math.sin(theta)
                g = np.eye(n)
                g[p, p] = c
                g[q, q] = c
                g[p, q] = s
                g[q, p] = -s
                a = g.T @ a @ g
    return np.sort(np.diag(a))[::-1]


def singular_values(x) -> np.ndarray:
    """Singular values as square roots of the Gram eigenvalues."""
    x = np.asarray(x, dtype=np.float64)
    gram = x.T @ x if x.shape[0] >= x.shape[1] else x @ x.T
    eig = np.clip(jacobi_eigenvalues(gram), 0.0, None)
    return np.sqrt(eig)


def characteristic_cubic_eigenvalues(sym3) -> np.ndarray:
    """Eigenvalues of a symmetric 3x3 matrix by bisection on det(A - t I)."""
    a = np.array(sym3, dtype=np.float64)
    assert a.shape == (3, 3)

    def det3(m):
        return (
            m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
        )

    def charpoly(t):
        return det3(a - t * np.eye(3))

    bound = float(np.max(np.abs(a))) * 3.0 + 1.0
    # sample densely enough to bracket the three real roots
    grid = np.linspace(-bound, bound, 20001)
    values = [charpoly(t) for t in grid]
    roots = []
    for i in range(len(grid) - 1):
        if values[i] == 0.0:
            roots.append(grid[i])
        elif values[i] * values[i + 1] < 0.0:
            lo, hi = grid[i], grid[i + 1]
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if charpoly(lo) * charpoly(mid) <= 0.0:
                    hi = mid
                else:
                    lo = mid
            roots.append(0.5 * (lo + hi))
    return np.sort(np.array(roots))[::-1]


def gauss_jordan_solve(a, b) -> np.ndarray:
    """Solve a x = b by Gauss-Jordan elimination with partial pivoting."""
    a = np.array(a, dtype=np.float64)
    rhs = np.array(b, dtype=np.float64).reshape(-1)
    n = a.shape[0]
    aug = np.hstack([a, rhs.reshape(-1, 1)])
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[pivot, col]) < 1e-300:
            raise ValueError("singular matrix in oracle solve")
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        aug[col] = aug[col] / aug[col, col]
        for row in range(n):
            if row != col and aug[row, col] != 0.0:
                aug[row] = aug[row] - aug[row, col] * aug[col]
    return aug[:, n]


def gauss_jordan_inverse(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    cols = [gauss_jordan_solve(a, np.eye(n)[:, j]) for j in range(n)]
    return np.column_stack(cols)


def simpson(f, lo: float, hi: float, intervals: int = 4000) -> float:
    """Composite Simpson quadrature (intervals is made even)."""
    m = intervals + (intervals % 2)
    grid = np.linspace(lo, hi, m + 1)
    values = np.array([f(t) for t in grid])
    h = (hi - lo) / m
    return float(h / 3.0 * (values[0] + values[-1] + 4.0 * values[1:-1:2].sum() + 2.0 * values[2:-1:2].sum()))


def central_difference(f, x: float, h: float = 1e-6) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)


def grid_minimizer(f, lo: float, hi: float, step: float = 1e-4) -> float:
    """Argmin of a scalar function over a dense grid."""
    grid = np.arange(lo, hi + step, step)
    values = np.array([f(t) for t in grid])
    return float(grid[int(np.argmin(values))])


def normal_upper_tail_oracle(t: float) -> float:
    """1 - Phi(t) for t >= 0: Taylor series below t = 5, the Laplace
    continued fraction for the Mills ratio above (no cancellation in the
    far tail)."""
    assert t >= 0
    pdf = math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)
    if t <= 5.0:
        # Phi(t) = 1/2 + pdf(t) * sum_k t^(2k+1) / (1*3*5*...*(2k+1))
        term = t
        total = t
        k = 0
        while term > 1e-20 * max(total, 1e-300):
            k += 1
            term *= t * t / (2 * k + 1)
            total += term
        return 0.5 - pdf * total
    # 1 - Phi(t) = pdf(t) / (t + 1/(t + 2/(t + 3/(t + ...))))
    cf = 0.0
    for k in range(400, 0, -1):
        cf = k / (t + cf)
    return pdf / (t + cf)


def normal_cdf_oracle(z: float) -> float:
    if z >= 0:
        return 1.0 - normal_upper_tail_oracle(z)
    return normal_upper_tail_oracle(-z)


def two_sided_p_oracle(z: float) -> float:
    return 2.0 * normal_upper_tail_oracle(abs(z))


def lasso_subgradient_descent(x, y, lam: float, iterations: int = 200_000) -> np.ndarray:
    """Subgradient descent on 0.5 ||y - X b||^2 + lam ||b||_1.

    Strong convexity (full-column-rank X) gives O(1/k) convergence with
    the 2/(mu (k+1)) step; the weighted running average over the second
    half of the iterations is returned.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    mu = float(np.min(jacobi_eigenvalues(x.T @ x)))
    assert mu > 0, "oracle requires strong convexity"
    beta = np.zeros(x.shape[1])
    acc = np.zeros_like(beta)
    weight = 0.0
    half = iterations // 2
    for k in range(1, iterations + 1):
        grad = x.T @ (x @ beta - y) + lam * np.sign(beta)
        beta = beta - (2.0 / (mu * (k + 1))) * grad
        if k > half:
            acc += k * beta
            weight += k
    return acc / weight


def lasso_sign_enumeration(x, y, lam: float) -> np.ndarray:
    """Exact Lasso solution for small p by enumerating sign patterns.

    For each pattern s in {-1,0,+1}^p the stationarity system on the
    active set is solved by elimination and checked for sign and
    dead-zone consistency; the consistent pattern is the global optimum.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    p = x.shape[1]
    assert p <= 8, "enumeration oracle is exponential in p"
    best = None
    best_obj = math.inf
    for code in range(3**p):
        signs = []
        c = code
        for _ in range(p):
            signs.append(c % 3 - 1)
            c //= 3
        active = [j for j, s in enumerate(signs) if s != 0]
        beta = np.zeros(p)
        if active:
            xa = x[:, active]
            sa = np.array([signs[j] for j in active], dtype=np.float64)
            try:
                ba = gauss_jordan_solve(xa.T @ xa, xa.T @ y - lam * sa)
            except ValueError:
                continue
            if any(np.sign(ba) != sa):
                continue
            beta[active] = ba
        resid_corr = x.T @ (y - x @ beta)
        inactive_ok = all(
            abs(resid_corr[j]) <= lam + 1e-9 for j in range(p) if signs[j] == 0
        )
        if not inactive_ok:
            continue
        r = y - x @ beta
        obj = 0.5 * float(r @ r) + lam * float(np.sum(np.abs(beta)))
        if obj < best_obj:
            best_obj = obj
            best = beta
    assert best is not None, "no consistent sign pattern found"
    return best
