"""Which orbit periods occur, and the closed-form period-9 and period-11 levels."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .core import LynessParams, Point2, Real
from .errors import DomainError
from .invariant import diagonal_roots


@dataclass(frozen=True)
class PeriodWitness:
    """Period q with every coprime p such that p/q is an achievable rotation number."""

    q: int
    p_list: tuple[int, ...]

    @property
    def achievable(self) -> bool:
        return bool(self.p_list)


def period_witnesses(q: int) -> PeriodWitness:
    """All p coprime to q with 1/6 < p/q < 1/4 and p/q != 1/5.

    Rotation numbers for alpha not in {0, 1} fill the open interval between
    rho_alpha and 1/5, so 1/5 itself (period 5) never occurs.
    """
    ps = tuple(
        p
        for p in range(1, q)
        if gcd(p, q) == 1 and 4 * p < q < 6 * p and Fraction(p, q) != Fraction(1, 5)
    )
    return PeriodWitness(q, ps)


def period_set(q_max: int) -> list[PeriodWitness]:
    """Witness rows for q = 1..q_max, including the rows with no admissible p."""
    if q_max < 1:
        raise ValueError(f"q_max must be at least 1, got {q_max}")
    return [period_witnesses(q) for q in range(1, q_max + 1)]


def achievable_periods(q_max: int) -> list[int]:
    return [w.q for w in period_set(q_max) if w.achievable]


def critical_alpha(period: int) -> float:
    """alpha at which rho_alpha = 2/period: (1 - 2c) / (4 c^2) with c = cos(4 pi / period)."""
    if period not in (9, 11):
        raise DomainError(f"closed forms exist for periods 9 and 11 only, got {period}")
    c = math.cos(4 * math.pi / period)
    return (1 - 2 * c) / (4 * c * c)


def special_level_value(period: int, alpha: float) -> float:
    """The level on which every orbit has the given period (when it is a genuine curve)."""
    a = float(alpha)
    if not a > 0 or math.isinf(a):
        raise DomainError(f"alpha must be positive and finite, got {alpha}")
    if period == 9:
        return (a - 1) * (a * a - a + 1) / a
    if period == 11:
        # positive square-root branch; the other branch is always below v_min
        return (1 - a) * (1 - 2 * a + math.sqrt(1 - 4 * a * a + 4 * a**3)) / (2 * a * a)
    raise DomainError(f"closed forms exist for periods 9 and 11 only, got {period}")


@dataclass(frozen=True)
class SpecialLevel:
    period: int
    alpha: float
    v_bar: float
    v_min: float
    lambda_far: float | None
    valid: bool

    @property
    def params(self) -> LynessParams:
        return LynessParams(self.alpha)


def special_level(period: int, alpha: float) -> SpecialLevel:
    """Period-9 or period-11 level for ``alpha`` and the far diagonal point on it.

    Valid means alpha > alpha_9 (period 9) or alpha < alpha_11 (period 11);
    that is equivalent to v_bar > v_min and both are required here.
    """
    v_bar = special_level_value(period, alpha)
    params = LynessParams(float(alpha))
    a_c = critical_alpha(period)
    by_alpha = alpha > a_c if period == 9 else alpha < a_c
    valid = by_alpha and v_bar > params.v_min
    lam = diagonal_roots(params, v_bar)[1] if valid else None
    return SpecialLevel(period, float(alpha), v_bar, params.v_min, lam, valid)


@dataclass(frozen=True)
class ClosureReport:
    period: int
    alpha: float
    start: Point2
    residual: float  # ||f^period(P) - P|| / ||P||
    early_residuals: tuple[float, ...]  # same quantity for k = 1..period-1
    tolerance: float

    @property
    def closed(self) -> bool:
        return self.residual < self.tolerance

    @property
    def principal(self) -> bool:
        return all(r > self.tolerance for r in self.early_residuals)

    @property
    def ok(self) -> bool:
        return self.closed and self.principal


def orbit_points(start: tuple[float, float], n: int, alpha: float) -> list[tuple[float, float]]:
    x, y = start
    out = [(x, y)]
    for _ in range(n):
        x, y = y, (alpha + y) / x
        out.append((x, y))
    return out


def verify_closure(level: SpecialLevel, tolerance: float = 1e-8) -> ClosureReport:
    """Follow the orbit of (lambda_far, lambda_far) for ``period`` steps and measure the return."""
    if not level.valid or level.lambda_far is None:
        raise DomainError(f"level v_bar={level.v_bar} is not a curve for alpha={level.alpha}")
    lam = level.lambda_far
    pts = orbit_points((lam, lam), level.period, level.alpha)
    scale = math.hypot(lam, lam)
    rel = [math.hypot(x - lam, y - lam) / scale for x, y in pts[1:]]
    return ClosureReport(level.period, level.alpha, Point2(lam, lam), rel[-1], tuple(rel[:-1]), tolerance)


def tangency_residual(p: tuple[Real, Real] | Point2, params: LynessParams) -> float:
    """x^2 - y - alpha: zero exactly where dV/dx vanishes, where the level curve has a horizontal tangent.

    On the symmetric period-9 orbit it vanishes at f^4(P); on the period-11
    orbit at f^5(P).
    """
    x, y = p
    return x * x - y - params.alpha
