"""Regular sparse penalties and their univariate thresholding maps.

A penalty here is a fixed function pen: R -> R+ that is symmetric,
monotone away from zero, non-differentiable only at zero, and whose
derivative magnitude tends to 1 at the origin. The fitting objective
multiplies pen by an external weight lambda, so the concave penalties
(SCAD, MC+) are kept at unit internal scale: their shape parameter is
the only knob.

The thresholding map ``univariate_threshold(pen, z, lam)`` solves the
scalar problem

    minimize over b:  0.5 * (z - b)^2 + lam * pen(b)

exactly. For the Lasso this is plain soft thresholding; for SCAD/MC+ the
piecewise-quadratic objective is minimized by candidate enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

KINDS = ("lasso", "elastic_net", "scad", "mcp")

SCAD_DEFAULT_A = 3.7
MCP_DEFAULT_GAMMA = 3.0
ENET_DEFAULT_ALPHA = 0.5


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty identity plus its single shape parameter.

    kind         one of "lasso", "elastic_net", "scad", "mcp"
    param        elastic_net: ridge weight alpha in (0, 1];
                 scad: a > 2; mcp: gamma > 1; ignored for lasso
    """

    kind: str
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown penalty kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "elastic_net" and not 0.0 < self.param <= 1.0:
            raise ValueError(f"elastic_net alpha must be in (0, 1], got {self.param}")
        if self.kind == "scad" and not self.param > 2.0:
            raise ValueError(f"scad shape a must exceed 2, got {self.param}")
        if self.kind == "mcp" and not self.param > 1.0:
            raise ValueError(f"mcp shape gamma must exceed 1, got {self.param}")

    @property
    def concave(self) -> bool:
        """True for penalties concave on x > 0 (which forces |pen'| <= 1)."""
        return self.kind in ("lasso", "scad", "mcp")

    @property
    def convex(self) -> bool:
        return self.kind in ("lasso", "elastic_net")


def lasso() -> PenaltySpec:
    return PenaltySpec("lasso")


def elastic_net(alpha: float = ENET_DEFAULT_ALPHA) -> PenaltySpec:
    return PenaltySpec("elastic_net", alpha)


def scad(a: float = SCAD_DEFAULT_A) -> PenaltySpec:
    return PenaltySpec("scad", a)


def mcp(gamma: float = MCP_DEFAULT_GAMMA) -> PenaltySpec:
    return PenaltySpec("mcp", gamma)


def soft_threshold(x: float, lam: float) -> float:
    """sign(x) * (|x| - lam)+, the Lasso's univariate solution map."""
    if lam < 0:
        raise ValueError(f"threshold level must be nonnegative, got {lam}")
    if x > lam:
        return x - lam
    if x < -lam:
        return x + lam
    return 0.0


def pen_value(p: PenaltySpec, x: float) -> float:
    """Evaluate the penalty at a scalar coefficient."""
    t = abs(x)
    if p.kind == "lasso":
        return t
    if p.kind == "elastic_net":
        return t + 0.5 * p.param * t * t
    if p.kind == "scad":
        a = p.param
        if t <= 1.0:
            return t
        if t <= a:
            return (2.0 * a * t - t * t - 1.0) / (2.0 * (a - 1.0))
        return 0.5 * (a + 1.0)
    # mcp
    g = p.param
    if t <= g:
        return t - t * t / (2.0 * g)
    return 0.5 * g


def pen_derivative(p: PenaltySpec, x: float) -> float:
    """Derivative of pen_value at x != 0 (the penalty has a kink at zero)."""
    if x == 0.0:
        raise ValueError("penalty is non-differentiable at zero")
    s = 1.0 if x > 0 else -1.0
    t = abs(x)
    if p.kind == "lasso":
        return s
    if p.kind == "elastic_net":
        return s * (1.0 + p.param * t)
    if p.kind == "scad":
        a = p.param
        if t <= 1.0:
            return s
        if t <= a:
            return s * (a - t) / (a - 1.0)
        return 0.0
    # mcp
    g = p.param
    if t <= g:
        return s * (1.0 - t / g)
    return 0.0


def _scalar_objective(p: PenaltySpec, z: float, lam: float, b: float) -> float:
    r = z - b
    return 0.5 * r * r + lam * pen_value(p, b)


def _threshold_nonconvex(p: PenaltySpec, z: float, lam: float) -> float:
    # z >= 0 here. The objective is piecewise quadratic on [0, inf); the
    # global minimizer is either an interior stationary point of a convex
    # piece or a piece boundary, so enumerating those candidates is exact.
    # Stationary-point formulas are clamped to z: the minimizer never
    # exceeds z, but their float evaluation can round one ulp above it.
    if p.kind == "scad":
        a = p.param
        candidates = [0.0, 1.0, a]
        b1 = z - lam
        if 0.0 < b1 <= 1.0:
            candidates.append(min(b1, z))
        curv = 1.0 - lam / (a - 1.0)
        if curv > 0.0:
            b2 = (z - lam * a / (a - 1.0)) / curv
            if 1.0 <= b2 <= a:
                candidates.append(min(b2, z))
        if z >= a:
            candidates.append(z)
    else:  # mcp
        g = p.param
        candidates = [0.0, g]
        if lam < g:
            b1 = g * (z - lam) / (g - lam)
            if 0.0 < b1 <= g:
                candidates.append(min(b1, z))
        if z >= g:
            candidates.append(z)
    # ties resolve toward the smaller-magnitude solution
    return min(candidates, key=lambda b: (_scalar_objective(p, z, lam, b), b))


def univariate_threshold(p: PenaltySpec, z: float, lam: float) -> float:
    """Global minimizer of 0.5*(z - b)^2 + lam * pen(b) over scalar b."""
    if lam < 0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    if lam == 0.0:
        return z
    if p.kind == "lasso":
        return soft_threshold(z, lam)
    if p.kind == "elastic_net":
        return soft_threshold(z, lam) / (1.0 + lam * p.param)
    if z == 0.0:
        return 0.0
    if z < 0.0:
        return -_threshold_nonconvex(p, -z, lam)
    return _threshold_nonconvex(p, z, lam)
