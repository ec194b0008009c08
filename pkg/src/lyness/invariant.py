"""The conserved quantity V(x, y) = (x+1)(y+1)(x+y+alpha)/(xy) and its level curves.

V has a single critical point, a nondegenerate minimum at the fixed point
(omega, omega), and blows up on the boundary of the quadrant, so every level
v > v_min is a closed curve around the fixed point.  The functions below locate
where such a curve meets the diagonal and how far it extends horizontally.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ._roots import bracketed_root
from .core import LynessParams, Point2, Real, _check_positive, iterate_arrays
from .errors import BelowMinimumLevelError, DomainError

# Levels within this relative distance of v_min are treated as the degenerate curve.
DEGENERATE_RTOL = 1e-12


def invariant_V(p: Iterable[Real], params: LynessParams) -> float:
    x, y = p
    _check_positive(x, y)
    return (x + 1) * (y + 1) * (x + y + params.alpha) / (x * y)


def gradient_V(p: Iterable[Real], params: LynessParams) -> tuple[float, float]:
    x, y = p
    _check_positive(x, y)
    a = params.alpha
    dx = (y + 1) * (x * x - y - a) / (x * x * y)
    dy = (x + 1) * (y * y - x - a) / (x * y * y)
    return dx, dy


def hessian_V(p: Iterable[Real], params: LynessParams) -> np.ndarray:
    """Closed-form second derivatives of V at ``p``."""
    x, y = (float(c) for c in p)
    _check_positive(x, y)
    a = float(params.alpha)
    vxx = 2 * (y + 1) * (y + a) / (x**3 * y)
    vyy = 2 * (x + 1) * (x + a) / (x * y**3)
    vxy = (a - x * x - y * y) / (x * x * y * y)
    return np.array([[vxx, vxy], [vxy, vyy]])


class HessianCheck(NamedTuple):
    positive: bool
    determinant: float


def hessian_min_check(params: LynessParams) -> HessianCheck:
    """Determinant of the Hessian at the fixed point, ((w+1)^2/w^4)(4 - 1/w^2).

    Positive for every alpha >= 0 because omega >= 1 > 1/2.
    """
    w = params.omega
    det = (w + 1) ** 2 / w**4 * (4 - 1 / w**2)
    return HessianCheck(det > 0, det)


def _require_level(params: LynessParams, v: float) -> bool:
    """Validate ``v``; True when it is the degenerate minimum level."""
    if not math.isfinite(v):
        raise DomainError(f"level value must be finite, got {v}")
    if v <= params.v_min * (1 + DEGENERATE_RTOL):
        if v >= params.v_min * (1 - DEGENERATE_RTOL):
            return True
        raise BelowMinimumLevelError(f"v = {v} is below the minimum level v_min = {params.v_min}")
    return False


def diagonal_value(lam: float, params: LynessParams) -> float:
    """V restricted to the diagonal: (l+1)^2 (2l + alpha) / l^2."""
    return (lam + 1) ** 2 * (2 * lam + params.alpha) / (lam * lam)


def diagonal_roots(params: LynessParams, v: float) -> tuple[float, float]:
    """The two diagonal points (l, l) of the level curve V = v.

    Roots of (l+1)^2 (2l + alpha) = v l^2, one in (0, omega) and one in
    (omega, inf).  V is strictly monotone on each side of omega along the
    diagonal, which gives guaranteed brackets.
    """
    if _require_level(params, v):
        return params.omega, params.omega
    a = float(params.alpha)
    w = params.omega

    def cubic(lam: float) -> float:
        return (lam + 1) ** 2 * (2 * lam + a) - v * lam * lam

    def dcubic(lam: float) -> float:
        return 2 * (lam + 1) * (2 * lam + a) + 2 * (lam + 1) ** 2 - 2 * v * lam

    lo = 0.5 * w
    while diagonal_value(lo, params) <= v:
        lo *= 0.5
    hi = 2.0 * w
    while diagonal_value(hi, params) <= v:
        hi *= 2.0
    near = bracketed_root(cubic, dcubic, lo, w)
    far = bracketed_root(cubic, dcubic, w, hi)
    return near, far


def horizontal_extent_value(x: float, params: LynessParams) -> float:
    """min over y of V(x, y), attained at y = sqrt(x + alpha)."""
    s = math.sqrt(x + params.alpha)
    return (x + 1) * (1 + s) ** 2 / x


@dataclass(frozen=True)
class ProjectedInterval:
    """Projection of a level curve onto the x axis; contains every x_n of an orbit on it."""

    lo: float
    hi: float

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo


def interval_bounds(params: LynessParams, v: float) -> ProjectedInterval:
    """End points of the x-projection of the curve V = v.

    Solves (x+1)(1 + sqrt(x+alpha))^2 / x = v; the left side is the minimum of
    V over the vertical line through x, so the curve meets that line exactly
    when it is <= v.  Its x-derivative equals dV/dx at the minimizing y.
    """
    if _require_level(params, v):
        return ProjectedInterval(params.omega, params.omega)
    a = float(params.alpha)
    w = params.omega

    def g(x: float) -> float:
        return horizontal_extent_value(x, params) - v

    def dg(x: float) -> float:
        s = math.sqrt(x + a)
        return (s + 1) * (x * x - s - a) / (x * x * s)

    lo = 0.5 * w
    while g(lo) <= 0:
        lo *= 0.5
    hi = 2.0 * w
    while g(hi) <= 0:
        hi *= 2.0
    return ProjectedInterval(bracketed_root(g, dg, lo, w), bracketed_root(g, dg, w, hi))


@dataclass(frozen=True)
class LevelCurve:
    """The closed curve V = v around the fixed point, with its diagonal crossings."""

    params: LynessParams
    v: float
    diag_near: float
    diag_far: float

    @property
    def far_point(self) -> Point2:
        return Point2(self.diag_far, self.diag_far)

    @property
    def near_point(self) -> Point2:
        return Point2(self.diag_near, self.diag_near)

    def interval(self) -> ProjectedInterval:
        return interval_bounds(self.params, self.v)

    def point_at_angle(self, theta: float) -> Point2:
        return curve_point_at_angle(self.params, self.v, theta)


def level_curve(params: LynessParams, v: float) -> LevelCurve:
    near, far = diagonal_roots(params, v)
    return LevelCurve(params, v, near, far)


def level_of(p: Iterable[Real], params: LynessParams) -> LevelCurve:
    """Level curve through the point ``p``."""
    return level_curve(params, float(invariant_V(p, params)))


def curve_point_at_angle(params: LynessParams, v: float, theta: float) -> Point2:
    """Where the ray from the fixed point at angle ``theta`` meets V = v.

    V is strictly increasing along every such ray (checked numerically in the
    tests), so the crossing is unique.
    """
    if _require_level(params, v):
        return params.fixed_point
    w = params.omega
    c, s = math.cos(theta), math.sin(theta)
    if c >= 0 and s >= 0:
        # unbounded ray: solve in the distance t from the fixed point
        def g(t: float) -> float:
            return invariant_V((w + t * c, w + t * s), params) - v

        def dg(t: float) -> float:
            gx, gy = gradient_V((w + t * c, w + t * s), params)
            return gx * c + gy * s

        hi = w
        while g(hi) <= 0:
            hi *= 2.0
        t = bracketed_root(g, dg, 0.0, hi)
        return Point2(w + t * c, w + t * s)

    # bounded ray: solve in the coordinate that reaches zero first, so the
    # tolerance is relative to that (possibly tiny) coordinate
    x_limits = -c >= -s
    lead, other = (c, s) if x_limits else (s, c)
    slope = other / -lead

    def point(xi: float) -> tuple[float, float]:
        q = w + (w - xi) * slope
        return (xi, q) if x_limits else (q, xi)

    def h(xi: float) -> float:
        return invariant_V(point(xi), params) - v

    def dh(xi: float) -> float:
        gx, gy = gradient_V(point(xi), params)
        return gx - gy * slope if x_limits else gy - gx * slope

    lo = 0.5 * w
    while h(lo) <= 0:
        lo *= 0.5
    return Point2(*point(bracketed_root(h, dh, lo, w)))


def sample_level_curve(params: LynessParams, v: float, n_points: int) -> list[tuple[float, Point2]]:
    """``n_points`` points on V = v at equally spaced polar angles about the fixed point."""
    if n_points < 1:
        raise ValueError("n_points must be positive")
    out = []
    for k in range(n_points):
        theta = 2 * math.pi * k / n_points
        out.append((theta, curve_point_at_angle(params, v, theta)))
    return out


class DriftReport(NamedTuple):
    max_step_drift: float
    max_accumulated_drift: float
    steps: int


def invariant_drift(params: LynessParams, seeds: Sequence[Iterable[float]], n_steps: int) -> DriftReport:
    """Relative change of V along float orbits of several seeds.

    ``max_step_drift`` is the largest |V(f(p)) - V(p)| / V(p) seen in a single
    step; ``max_accumulated_drift`` the largest |V(f^k(p)) - V(p)| / V(p).
    """
    pts = np.asarray([tuple(map(float, s)) for s in seeds], dtype=float)
    a = float(params.alpha)

    def V(x, y):
        return (x + 1) * (y + 1) * (x + y + a) / (x * y)

    xs = np.empty((n_steps + 1, len(pts)))
    ys = np.empty_like(xs)
    xs[0], ys[0] = pts[:, 0], pts[:, 1]
    for k, (x, y) in enumerate(iterate_arrays(pts[:, 0], pts[:, 1], n_steps, a), start=1):
        xs[k], ys[k] = x, y
    vals = V(xs, ys)
    step = np.abs(np.diff(vals, axis=0)) / vals[:-1]
    total = np.abs(vals - vals[0]) / vals[0]
    return DriftReport(float(step.max(initial=0.0)), float(total.max()), n_steps)


class LevelMarker(enum.Enum):
    """Non-numeric level value.  Kept out of float arithmetic on purpose."""

    INFINITY = "infinity"

    def __repr__(self) -> str:
        return "LevelMarker.INFINITY"


@dataclass(frozen=True)
class ExceptionalLevels:
    """The five levels at which the projective completion of V = v degenerates."""

    alpha: float
    v_zero: float
    v_infinity: LevelMarker
    v_line_conic: float
    v_min: float
    v_prime: float

    def finite(self) -> tuple[float, ...]:
        return (self.v_zero, self.v_line_conic, self.v_min, self.v_prime)

    def outside_dynamic_range(self) -> bool:
        """True when no exceptional value lies in the open range (v_min, inf)."""
        return all(val <= self.v_min for val in self.finite())


def exceptional_levels(params: LynessParams) -> ExceptionalLevels:
    """{0, infinity, alpha - 1, v_min, v'} where v' comes from the negative fixed point.

    The negative root w' = (1 - sqrt(1 + 4 alpha))/2 of w^2 = w + alpha gives
    v' = (w'+1)^3 / w' = v_min - (1 + 4 alpha)^(3/2) / alpha.
    """
    a = float(params.alpha)
    if not a > 0:
        raise DomainError("exceptional levels are defined for alpha > 0")
    v_prime = params.v_min - (1 + 4 * a) ** 1.5 / a
    levels = ExceptionalLevels(
        alpha=a,
        v_zero=0.0,
        v_infinity=LevelMarker.INFINITY,
        v_line_conic=a - 1,
        v_min=params.v_min,
        v_prime=v_prime,
    )
    if not (levels.v_line_conic < levels.v_min and levels.v_prime < levels.v_min):
        raise ArithmeticError(f"exceptional level inside the dynamic range for alpha={a}")
    return levels
