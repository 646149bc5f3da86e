"""Executable certificates for the preconditioning equivalences.

Each check runs a batch of randomized trials, computes the two sides of
one algebraic identity through independent code paths, and reports the
worst sup-norm discrepancy together with the seed that produced it.

Checks and their identities (all fits use the objective with the 0.5
factor, ``0.5 * ||Y - X b||^2 + lam * sum pen(b_j)``; in the convention
without the 0.5 factor every lambda below corresponds to 2 * lambda):

  lemma1        orthonormal X:   Lasso fit  ==  t_lam(beta_ols)
  thm1          full rank, n>p:  Lasso on puffer(X, Y)  ==  t_lam(beta_ols)
  thm2          Lasso on puffer_scaled(X, Y) selects exactly
                {j : |Z_j| > lam * sqrt(n) / sigma}
                == {j : p_j <= 2 (1 - Phi(lam sqrt(n) / sigma))},
                with coefficients t_lam(sigma Z_j / sqrt(n))
  thm3          p>=n: every local minimum on puffer_tau data satisfies
                ridge_j(tau) - P_tau(beta)_j == lam * pen'(beta_j) on the
                active set and |...| <= lam off it
  lemma2        P_tau(v) == (F_tau X)' F_tau X v  and
                ridge(tau) == (F_tau X)' F_tau Y
  eq10_gap      distinct local minima under concave penalties differ by
                at most 2 * lam per coordinate after row-space projection
  thm1_general / thm2_general   the lemma1/thm1/thm2 statements with the
                SCAD and MC+ thresholding maps in place of t_lam

Negative controls guard against trivially-passing checks: thm1 without
the preconditioner and thm2 with the unscaled transform must both show
discrepancies above 1e-2; if they do not, the report fails with the
sentinel discrepancy 1.0.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import estimators, preconditioners, solver
from .errors import DataError
from .penalties import (
    PenaltySpec,
    lasso,
    mcp,
    pen_derivative,
    scad,
    soft_threshold,
    univariate_threshold,
)
from .solver import SolverConfig

Problem = tuple[np.ndarray, np.ndarray, float]
Generator = Callable[[int], Problem]

#: tolerance for every theorem check: 10x the solver's KKT tolerance
THEOREM_TOL = 10.0 * SolverConfig().kkt_tol
LEMMA2_TOL = 1e-8
TIE_TOL = 1e-9
NEGATIVE_CONTROL_MIN = 1e-2
#: sentinel discrepancy reported when a negative control fails to fail
NEGATIVE_CONTROL_SENTINEL = 1.0


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    trials: int
    max_discrepancy: float
    tolerance: float
    passed: bool
    worst_case_seed: int
    details: dict = field(default_factory=dict)


def _report(theorem_id, trials, max_discrepancy, tolerance, worst_case_seed, **details):
    return TheoremReport(
        theorem_id=theorem_id,
        trials=trials,
        max_discrepancy=float(max_discrepancy),
        tolerance=float(tolerance),
        passed=bool(max_discrepancy <= tolerance),
        worst_case_seed=int(worst_case_seed),
        details=details,
    )


def _resolve_threads(requested: int | None) -> int:
    """Worker count for trial batches.

    PUFFER_LASSO_THREADS caps any explicit request and supplies the
    count when the caller leaves it unset; without either, trials run
    sequentially (profitable here, since the per-trial numpy work is
    small enough to be GIL-bound).
    """
    raw = os.environ.get("PUFFER_LASSO_THREADS")
    cap = None
    if raw:
        try:
            cap = int(raw)
        except ValueError as exc:
            raise DataError(f"PUFFER_LASSO_THREADS must be an integer, got {raw!r}") from exc
    if requested is None:
        threads = cap if cap is not None else 1
    elif cap is not None:
        threads = min(requested, cap)
    else:
        threads = requested
    return max(threads, 1)


def _run_trials(fn, seeds, threads: int | None):
    workers = _resolve_threads(threads)
    if workers <= 1:
        return [fn(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seeds))


def _reduce(results):
    """Max discrepancy and its seed; ties resolve to the smallest seed.

    The reduction is order-insensitive so threaded and sequential runs
    agree bit for bit.
    """
    worst = -1.0
    worst_seed = -1
    for seed, disc in results:
        if disc > worst or (disc == worst and seed < worst_seed):
            worst = disc
            worst_seed = seed
    return worst, worst_seed


def _lambda_grid(scale: float, count: int, lo_frac: float = 1e-3, hi_frac: float = 1.2):
    """Log-spaced grid reaching past the all-zero threshold at the top."""
    s = max(float(scale), 1e-8)
    return np.geomspace(lo_frac * s, hi_frac * s, count)


def _upper_quantile(p_two_sided: float) -> float:
    """z with 2 * (1 - Phi(z)) == p_two_sided, by bisection."""
    lo, hi = 0.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if estimators.two_sided_p(mid) > p_two_sided:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# problem generators
# ---------------------------------------------------------------------------


def _signal(rng, p, density=0.7):
    beta = rng.uniform(0.5, 2.5, size=p) * rng.choice([-1.0, 1.0], size=p)
    beta[rng.random(p) >= density] = 0.0
    return beta


def _response(rng, x, noise):
    n, p = x.shape
    return x @ _signal(rng, p) + noise * rng.standard_normal(n)


def orthonormal_problems(n_max: int = 48, p_max: int = 16, noise: float = 0.5) -> Generator:
    """Designs with exactly orthonormal columns, n > p."""

    def gen(seed: int) -> Problem:
        rng = np.random.default_rng(seed)
        p = int(rng.integers(3, p_max + 1))
        n = int(rng.integers(2 * p + 2, max(2 * p + 3, n_max + 1)))
        q, _ = np.linalg.qr(rng.standard_normal((n, p)))
        x = q[:, :p]
        return x, _response(rng, x, noise), noise

    return gen


def equicorrelated_problems(rho: float, n_max: int = 40, p_max: int = 10, noise: float = 0.5) -> Generator:
    """Columns with common pairwise correlation rho."""

    def gen(seed: int) -> Problem:
        rng = np.random.default_rng(seed)
        p = int(rng.integers(3, p_max + 1))
        n = int(rng.integers(2 * p + 4, max(2 * p + 5, n_max + 1)))
        z = rng.standard_normal((n, p))
        c1 = math.sqrt(1.0 - rho)
        c2 = math.sqrt(1.0 - rho + p * rho)
        x = c1 * z + (c2 - c1) * z.mean(axis=1, keepdims=True)
        return x, _response(rng, x, noise), noise

    return gen


def heteroskedastic_problems(n_max: int = 40, p_max: int = 10, noise: float = 0.5) -> Generator:
    """Column norms spanning two orders of magnitude."""

    def gen(seed: int) -> Problem:
        rng = np.random.default_rng(seed)
        p = int(rng.integers(3, p_max + 1))
        n = int(rng.integers(2 * p + 4, max(2 * p + 5, n_max + 1)))
        scales = np.geomspace(0.1, 10.0, p)
        x = rng.standard_normal((n, p)) * scales
        return x, _response(rng, x, noise), noise

    return gen


def spiked_problems(cond_max: float = 1e4, n_max: int = 40, p_max: int = 10, noise: float = 0.5) -> Generator:
    """Spiked singular spectrum with condition number up to cond_max."""

    def gen(seed: int) -> Problem:
        rng = np.random.default_rng(seed)
        p = int(rng.integers(3, p_max + 1))
        n = int(rng.integers(2 * p + 4, max(2 * p + 5, n_max + 1)))
        cond = 10.0 ** rng.uniform(1.0, math.log10(cond_max))
        u, _ = np.linalg.qr(rng.standard_normal((n, p)))
        v, _ = np.linalg.qr(rng.standard_normal((p, p)))
        d = np.geomspace(1.0, 1.0 / cond, p)
        x = (u * d) @ v.T
        return x, _response(rng, x, noise), noise

    return gen


def mixed_full_rank_problems(noise: float = 0.5) -> Generator:
    """Rotates between the equicorrelated, heteroskedastic and spiked families."""
    families = (
        equicorrelated_problems(0.0, noise=noise),
        equicorrelated_problems(0.5, noise=noise),
        equicorrelated_problems(0.9, noise=noise),
        heteroskedastic_problems(noise=noise),
        spiked_problems(noise=noise),
    )

    def gen(seed: int) -> Problem:
        return families[seed % len(families)](seed)

    return gen


def inference_scale_problems(noise: float = 0.5) -> Generator:
    """Full-rank designs whose signal is drawn in standard-error units,
    keeping |Z_j| small enough that two-sided p-values stay above the
    float64 underflow threshold (reached near |z| = 38.6)."""
    from . import linalg

    families = (
        heteroskedastic_problems(noise=noise),
        equicorrelated_problems(0.5, noise=noise),
        equicorrelated_problems(0.9, noise=noise),
        spiked_problems(noise=noise),
    )

    def gen(seed: int) -> Problem:
        x, _, _ = families[seed % len(families)](seed)
        rng = np.random.default_rng(seed + 0x51ED5EED)
        n, p = x.shape
        nu = linalg.gram_inverse_diagonal(x)
        u = rng.uniform(0.3, 2.5, size=p) * rng.choice([-1.0, 1.0], size=p)
        u[rng.random(p) >= 0.75] = 0.0
        beta = u * noise * np.sqrt(nu)
        y = x @ beta + noise * rng.standard_normal(n)
        return x, y, noise

    return gen


def wide_problems(n_max: int = 12, p_max: int = 36, noise: float = 0.5) -> Generator:
    """p >= n designs with singular values kept in [0.5, 3] so the tau=0
    transforms stay well conditioned."""

    def gen(seed: int) -> Problem:
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, n_max + 1))
        p = int(rng.integers(n + 4, max(n + 5, p_max + 1)))
        u, _ = np.linalg.qr(rng.standard_normal((n, n)))
        v, _ = np.linalg.qr(rng.standard_normal((p, n)))
        d = np.sort(rng.uniform(0.5, 3.0, size=n))[::-1]
        x = (u * d) @ v.T
        return x, _response(rng, x, noise), noise

    return gen


def clustered_wide_problems(noise: float = 0.3) -> Generator:
    """Tiny p > n designs with near-duplicate columns; under concave
    penalties these routinely admit several local minima."""

    def gen(seed: int) -> Problem:
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 4))
        base = rng.standard_normal((n, n))
        cols = []
        for j in range(n):
            cols.append(base[:, j])
            cols.append(base[:, j] + 0.05 * rng.standard_normal(n))
        x = np.column_stack(cols)
        x /= np.linalg.norm(x, axis=0)
        y = x @ _signal(rng, x.shape[1], density=0.9) + noise * rng.standard_normal(n)
        return x, y, noise

    return gen


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def _threshold_vector(pen: PenaltySpec, z: np.ndarray, lam: float) -> np.ndarray:
    return np.array([univariate_threshold(pen, float(t), lam) for t in z])


def check_lemma1(
    gen: Generator,
    trials: int,
    *,
    n_lambdas: int = 10,
    seed: int = 0,
    threads: int | None = None,
) -> TheoremReport:
    """Orthonormal design: the Lasso fit equals soft-thresholded OLS."""

    def trial(s: int) -> tuple[int, float]:
        x, y, _ = gen(s)
        bols = estimators.ols(x, y)
        worst = 0.0
        for lam in _lambda_grid(np.max(np.abs(bols)), n_lambdas):
            fit = solver.solve(x, y, float(lam), lasso())
            target = np.array([soft_threshold(float(b), float(lam)) for b in bols])
            worst = max(worst, float(np.max(np.abs(fit.beta - target))))
        return s, worst

    results = _run_trials(trial, range(seed, seed + trials), threads)
    disc, worst_seed = _reduce(results)
    return _report("lemma1", trials, disc, THEOREM_TOL, worst_seed)


def check_theorem1(
    gen: Generator,
    trials: int,
    *,
    n_lambdas: int = 10,
    seed: int = 0,
    threads: int | None = None,
) -> TheoremReport:
    """Full-rank n > p design: Lasso on puffer data equals thresholded OLS.

    Also runs the negative control: on rho = 0.9 equicorrelated designs
    the same identity without the preconditioner must break by more than
    1e-2 at a mid-path lambda.
    """

    def trial(s: int) -> tuple[int, float]:
        x, y, _ = gen(s)
        bols = estimators.ols(x, y)
        pair = preconditioners.puffer(x, y)
        worst = 0.0
        for lam in _lambda_grid(np.max(np.abs(bols)), n_lambdas):
            fit = solver.solve(pair.x_tilde, pair.y_tilde, float(lam), lasso())
            target = np.array([soft_threshold(float(b), float(lam)) for b in bols])
            worst = max(worst, float(np.max(np.abs(fit.beta - target))))
        return s, worst

    results = _run_trials(trial, range(seed, seed + trials), threads)
    disc, worst_seed = _reduce(results)

    control_gen = equicorrelated_problems(0.9)
    control_worst = 0.0
    for s in range(seed, seed + min(trials, 24)):
        x, y, _ = control_gen(s)
        bols = estimators.ols(x, y)
        lam = 0.25 * float(np.max(np.abs(bols)))
        fit = solver.solve(x, y, lam, lasso())
        target = np.array([soft_threshold(float(b), lam) for b in bols])
        control_worst = max(control_worst, float(np.max(np.abs(fit.beta - target))))
    if control_worst <= NEGATIVE_CONTROL_MIN:
        disc = max(disc, NEGATIVE_CONTROL_SENTINEL)
    return _report(
        "thm1",
        trials,
        disc,
        THEOREM_TOL,
        worst_seed,
        negative_control_max=control_worst,
    )


def check_theorem2(
    gen: Generator,
    trials: int,
    *,
    n_lambdas: int = 25,
    seed: int = 0,
    threads: int | None = None,
) -> TheoremReport:
    """Scaled transform: the Lasso active set matches the Z and p-value rules.

    Per lambda the three sets {beta_j != 0}, {|Z_j| > lam sqrt(n)/sigma}
    and {p_j <= 2(1 - Phi(lam sqrt(n)/sigma))} must agree exactly
    (boundary ties within 1e-9 are excluded and counted), and the
    coefficients must equal t_lam(sigma Z_j / sqrt(n)). The
    lam = 1.96 sigma / sqrt(n) instance must reproduce the 0.05-p-value
    selection rule. The negative control swaps in the unscaled transform
    on heteroskedastic designs and must disagree by more than 1e-2.
    """
    z95 = _upper_quantile(0.05)  # ~1.959964; 1.96 is the conventional rounding

    def trial(s: int) -> tuple[int, float, int, int, int]:
        x, y, sigma = gen(s)
        n = x.shape[0]
        inf = estimators.inference(x, y, sigma)
        scaled_ols = sigma * inf.z_stats / math.sqrt(n)  # == N^-1 beta_ols
        pair = preconditioners.puffer_scaled(x, y)
        mismatches = 0
        ties = 0
        coef_worst = 0.0
        for lam in _lambda_grid(np.max(np.abs(scaled_ols)), n_lambdas):
            lam = float(lam)
            fit = solver.solve(pair.x_tilde, pair.y_tilde, lam, lasso())
            zthr = lam * math.sqrt(n) / sigma
            pthr = estimators.two_sided_p(zthr)
            target = np.array([soft_threshold(float(t), lam) for t in scaled_ols])
            coef_worst = max(coef_worst, float(np.max(np.abs(fit.beta - target))))
            active = set(fit.active_set)
            for j in range(x.shape[1]):
                if abs(abs(inf.z_stats[j]) - zthr) < TIE_TOL:
                    ties += 1
                    continue
                if pthr == 0.0 and inf.p_values[j] == 0.0:
                    # both tail probabilities underflow: the p-value rule
                    # cannot discriminate here, another boundary tie
                    ties += 1
                    continue
                in_fit = j in active
                in_z = abs(inf.z_stats[j]) > zthr
                in_p = inf.p_values[j] <= pthr
                if not (in_fit == in_z == in_p):
                    mismatches += 1
        # the 0.05 rule: lam = 1.96 sigma / sqrt(n) selects {p_j < .05};
        # |Z_j| inside [z95, 1.96] is the rounding ambiguity band and is
        # excluded like a tie
        lam05 = 1.96 * sigma / math.sqrt(n)
        fit = solver.solve(pair.x_tilde, pair.y_tilde, lam05, lasso())
        active = set(fit.active_set)
        rule_mismatches = 0
        for j in range(x.shape[1]):
            if z95 - TIE_TOL <= abs(inf.z_stats[j]) <= 1.96 + TIE_TOL:
                ties += 1
                continue
            if (j in active) != (inf.p_values[j] < 0.05):
                rule_mismatches += 1
        return s, coef_worst, mismatches, rule_mismatches, ties

    results = _run_trials(trial, range(seed, seed + trials), threads)
    coef_disc, worst_seed = _reduce([(s, c) for s, c, _, _, _ in results])
    total_mismatches = sum(m for _, _, m, _, _ in results)
    total_rule = sum(r for _, _, _, r, _ in results)
    total_ties = sum(t for _, _, _, _, t in results)
    disc = max(coef_disc, float(total_mismatches + total_rule))
    if total_mismatches + total_rule > 0:
        worst_seed = min(
            s for s, _, m, r, _ in results if m + r > 0
        )

    control_gen = heteroskedastic_problems()
    control_worst = 0.0
    for s in range(seed, seed + min(trials, 24)):
        x, y, sigma = control_gen(s)
        n = x.shape[0]
        inf = estimators.inference(x, y, sigma)
        scaled_ols = sigma * inf.z_stats / math.sqrt(n)
        pair = preconditioners.puffer(x, y)  # wrong transform on purpose
        lam = 0.25 * float(np.max(np.abs(scaled_ols)))
        fit = solver.solve(pair.x_tilde, pair.y_tilde, lam, lasso())
        target = np.array([soft_threshold(float(t), lam) for t in scaled_ols])
        control_worst = max(control_worst, float(np.max(np.abs(fit.beta - target))))
    if control_worst <= NEGATIVE_CONTROL_MIN:
        disc = max(disc, NEGATIVE_CONTROL_SENTINEL)
    return _report(
        "thm2",
        trials,
        disc,
        THEOREM_TOL,
        worst_seed,
        set_mismatches=total_mismatches,
        rule_005_mismatches=total_rule,
        boundary_ties_excluded=total_ties,
        negative_control_max=control_worst,
    )


def check_theorem3(
    gen: Generator,
    trials: int,
    pen: PenaltySpec,
    tau: float,
    *,
    n_lambdas: int = 4,
    seed: int = 0,
    threads: int | None = None,
    cfg: SolverConfig = SolverConfig(),
) -> tuple[TheoremReport, TheoremReport]:
    """p >= n: every local minimum on puffer_tau data, projected to the
    row space, sits within lam of the ridge fit, with exact gap
    lam * pen'(beta_j) on active coordinates.

    Returns the active-coordinate and inactive-coordinate reports.
    """

    def trial(s: int) -> tuple[int, float, float, int]:
        x, y, _ = gen(s)
        pair = preconditioners.puffer_tau(x, y, tau)
        ridge_fit = estimators.ridge(x, y, tau)
        lmax = solver.lambda_max(pair.x_tilde, pair.y_tilde)
        active_worst = 0.0
        inactive_worst = 0.0
        skipped = 0
        for lam in np.geomspace(0.05 * lmax, 0.6 * lmax, n_lambdas):
            lam = float(lam)
            for fit in solver.multistart_local_minima(pair.x_tilde, pair.y_tilde, lam, pen, cfg=cfg):
                if not fit.converged:
                    skipped += 1
                    continue
                gap = ridge_fit - preconditioners.project_rowspace(x, fit.beta, tau)
                for j in range(x.shape[1]):
                    if fit.beta[j] != 0.0:
                        expected = lam * pen_derivative(pen, float(fit.beta[j]))
                        active_worst = max(active_worst, abs(float(gap[j]) - expected))
                    else:
                        inactive_worst = max(inactive_worst, abs(float(gap[j])) - lam)
        return s, active_worst, max(inactive_worst, 0.0), skipped

    results = _run_trials(trial, range(seed, seed + trials), threads)
    active_disc, active_seed = _reduce([(s, a) for s, a, _, _ in results])
    inactive_disc, inactive_seed = _reduce([(s, i) for s, _, i, _ in results])
    nonconverged = sum(k for _, _, _, k in results)
    info = {"penalty": pen.kind, "tau": tau, "nonconverged_excluded": nonconverged}
    return (
        _report("thm3_active", trials, active_disc, THEOREM_TOL, active_seed, **info),
        _report("thm3_inactive", trials, inactive_disc, THEOREM_TOL, inactive_seed, **info),
    )


def check_lemma2(
    gen: Generator,
    trials: int,
    *,
    seed: int = 0,
    threads: int | None = None,
) -> TheoremReport:
    """Both factorization identities behind the ridge connection, compared
    against direct linear solves over randomized (X, v, Y, tau) tuples."""
    taus = (0.0, 0.1, 1.0, 10.0)

    def trial(s: int) -> tuple[int, float]:
        x, y, _ = gen(s)
        tau = taus[s % len(taus)]
        rng = np.random.default_rng(s + 0x9E3779B9)
        v = rng.standard_normal(x.shape[1])
        pair = preconditioners.puffer_tau(x, y, tau)
        proj_direct = preconditioners.project_rowspace(x, v, tau)
        proj_factored = pair.x_tilde.T @ (pair.x_tilde @ v)
        ridge_direct = estimators.ridge(x, y, tau)
        ridge_factored = preconditioners.ridge_via_precond(x, y, tau)
        return s, max(
            float(np.max(np.abs(proj_direct - proj_factored))),
            float(np.max(np.abs(ridge_direct - ridge_factored))),
        )

    results = _run_trials(trial, range(seed, seed + trials), threads)
    disc, worst_seed = _reduce(results)
    return _report("lemma2", trials, disc, LEMMA2_TOL, worst_seed)


def check_local_min_gap(
    gen: Generator,
    trials: int,
    pens: tuple[PenaltySpec, ...] = (scad(), mcp(1.5)),
    *,
    seed: int = 0,
    threads: int | None = None,
    cfg: SolverConfig = SolverConfig(multistart_count=12),
) -> TheoremReport:
    """Distinct local minima under concave penalties stay within 2 * lam
    per row-space coordinate; pairs at different lambdas obey the
    lam1 + lam2 variant."""
    if any(not p.concave for p in pens):
        raise ValueError("the local-minima gap bound applies to concave penalties only")

    def trial(s: int) -> tuple[int, float, int]:
        x, y, _ = gen(s)
        pair = preconditioners.puffer_tau(x, y, 0.0)
        lmax = solver.lambda_max(pair.x_tilde, pair.y_tilde)
        groups: list[tuple[float, np.ndarray]] = []
        for frac in (0.35, 0.55):
            lam = frac * lmax
            for pen in pens:
                for fit in solver.multistart_local_minima(pair.x_tilde, pair.y_tilde, lam, pen, cfg=cfg):
                    if fit.converged:
                        groups.append((lam, fit.beta))
        pairs = 0
        worst = 0.0
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                lam1, beta1 = groups[a]
                lam2, beta2 = groups[b]
                if np.max(np.abs(beta1 - beta2)) <= 1e-5:
                    continue
                pairs += 1
                proj = preconditioners.project_rowspace(x, beta1 - beta2, 0.0)
                worst = max(worst, float(np.max(np.abs(proj))) - (lam1 + lam2))
        return s, max(worst, 0.0), pairs

    results = _run_trials(trial, range(seed, seed + trials), threads)
    disc, worst_seed = _reduce([(s, w) for s, w, _ in results])
    total_pairs = sum(p for _, _, p in results)
    return _report(
        "eq10_gap",
        trials,
        disc,
        THEOREM_TOL,
        worst_seed,
        pairs_checked=total_pairs,
        trials_without_pairs=sum(1 for _, _, p in results if p == 0),
    )


def check_generalized_theorem1(
    gen: Generator,
    trials: int,
    pen: PenaltySpec,
    *,
    n_lambdas: int = 5,
    seed: int = 0,
    threads: int | None = None,
) -> TheoremReport:
    """Puffer data with a regular sparse penalty: the fit equals the
    penalty's own thresholding map applied to the OLS coefficients."""

    def trial(s: int) -> tuple[int, float]:
        x, y, _ = gen(s)
        bols = estimators.ols(x, y)
        pair = preconditioners.puffer(x, y)
        worst = 0.0
        for lam in _lambda_grid(np.max(np.abs(bols)), n_lambdas):
            fit = solver.solve(pair.x_tilde, pair.y_tilde, float(lam), pen)
            target = _threshold_vector(pen, bols, float(lam))
            worst = max(worst, float(np.max(np.abs(fit.beta - target))))
        return s, worst

    results = _run_trials(trial, range(seed, seed + trials), threads)
    disc, worst_seed = _reduce(results)
    return _report("thm1_general", trials, disc, THEOREM_TOL, worst_seed, penalty=pen.kind)


def check_generalized_theorem2(
    gen: Generator,
    trials: int,
    pen: PenaltySpec,
    *,
    n_lambdas: int = 5,
    seed: int = 0,
    threads: int | None = None,
) -> TheoremReport:
    """Scaled-transform analogue: coefficients equal the thresholding map
    applied to sigma * Z_j / sqrt(n)."""

    def trial(s: int) -> tuple[int, float]:
        x, y, sigma = gen(s)
        n = x.shape[0]
        z = estimators.z_stats(x, y, sigma)
        scaled_ols = sigma * z / math.sqrt(n)
        pair = preconditioners.puffer_scaled(x, y)
        worst = 0.0
        for lam in _lambda_grid(np.max(np.abs(scaled_ols)), n_lambdas):
            fit = solver.solve(pair.x_tilde, pair.y_tilde, float(lam), pen)
            target = _threshold_vector(pen, scaled_ols, float(lam))
            worst = max(worst, float(np.max(np.abs(fit.beta - target))))
        return s, worst

    results = _run_trials(trial, range(seed, seed + trials), threads)
    disc, worst_seed = _reduce(results)
    return _report("thm2_general", trials, disc, THEOREM_TOL, worst_seed, penalty=pen.kind)


def _merge(theorem_id: str, reports: list[TheoremReport]) -> TheoremReport:
    """Aggregate same-identity reports by worst discrepancy."""
    worst = max(reports, key=lambda r: (r.max_discrepancy, -r.worst_case_seed))
    details = dict(worst.details)
    details["components"] = len(reports)
    return _report(
        theorem_id,
        sum(r.trials for r in reports),
        worst.max_discrepancy,
        worst.tolerance,
        worst.worst_case_seed,
        **details,
    )


DEFAULT_TRIALS = {
    "lemma1": 200,
    "thm1": 200,
    "thm2": 200,
    "thm3": 8,  # per (penalty, tau) combination
    "lemma2": 500,
    "eq10_gap": 48,
    "generalized": 60,  # per penalty and identity
}

THM3_TAUS = (0.0, 0.1, 1.0)
THM3_PENALTIES = (lasso(), scad(), mcp())


def default_suite(
    seed: int = 0,
    *,
    trials: dict | None = None,
    threads: int | None = None,
) -> list[TheoremReport]:
    """Run every check with its default generator and trial budget.

    Deterministic for a given seed; per-check seed blocks are disjoint so
    trial streams never collide.
    """
    t = dict(DEFAULT_TRIALS)
    if trials:
        t.update(trials)
    block = 1_000_003

    def base(k: int) -> int:
        return seed + k * block

    reports = [
        check_lemma1(orthonormal_problems(), t["lemma1"], seed=base(1), threads=threads),
        check_theorem1(mixed_full_rank_problems(), t["thm1"], seed=base(2), threads=threads),
        check_theorem2(inference_scale_problems(), t["thm2"], seed=base(3), threads=threads),
    ]

    actives: list[TheoremReport] = []
    inactives: list[TheoremReport] = []
    k = 4
    for pen in THM3_PENALTIES:
        for tau in THM3_TAUS:
            a, i = check_theorem3(
                wide_problems(), t["thm3"], pen, tau, seed=base(k), threads=threads
            )
            actives.append(a)
            inactives.append(i)
            k += 1
    reports.append(_merge("thm3_active", actives))
    reports.append(_merge("thm3_inactive", inactives))

    reports.append(
        check_local_min_gap(clustered_wide_problems(), t["eq10_gap"], seed=base(k), threads=threads)
    )
    reports.append(check_lemma2(wide_problems(), t["lemma2"], seed=base(k + 1), threads=threads))

    gen1: list[TheoremReport] = []
    gen2: list[TheoremReport] = []
    for i, pen in enumerate((scad(), mcp())):
        gen1.append(
            check_generalized_theorem1(
                mixed_full_rank_problems(), t["generalized"], pen, seed=base(k + 2 + i), threads=threads
            )
        )
        gen2.append(
            check_generalized_theorem2(
                inference_scale_problems(), t["generalized"], pen, seed=base(k + 4 + i), threads=threads
            )
        )
    reports.append(_merge("thm1_general", gen1))
    reports.append(_merge("thm2_general", gen2))
    return reports
