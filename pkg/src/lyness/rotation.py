"""Rotation numbers of the map restricted to its invariant level curves.

The estimator follows the polar angle of f^n(P) - F about the fixed point F.
Each level curve is star-shaped about F and the map turns it clockwise, so
every step advances the clockwise angle by an amount strictly between 0 and
one full turn; summing those advances gives a lift of the circle map and

    rho ~ (total clockwise angle) / (2 pi N),

with error below 1/N.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import LynessParams, Real, _check_positive
from .errors import DomainError, NumericalCorruptionError
from .invariant import diagonal_roots, invariant_V, _require_level

TWO_PI = 2.0 * math.pi
MIN_ITERS = 1000


@dataclass(frozen=True)
class RotationEstimate:
    rho: float
    iterations: int
    stderr_bound: float
    alpha: float
    v: float
    # smallest and largest single-step clockwise advance, in radians
    min_advance: float = math.nan
    max_advance: float = math.nan
    # set by the optional refinement pass when an exact return was found
    rational: Fraction | None = None

    @property
    def winding_span(self) -> float:
        """Per-step angle bound behind ``stderr_bound`` (one full turn)."""
        return self.stderr_bound * TWO_PI * self.iterations


def _wind(alpha: float, omega: float, x: float, y: float, n: int):
    """Accumulate the clockwise angle swept by n steps of the orbit of (x, y) about (omega, omega)."""
    dx, dy = x - omega, y - omega
    if dx == 0.0 and dy == 0.0:
        raise NumericalCorruptionError("seed coincides with the fixed point")
    atan2 = math.atan2
    total = 0.0
    lo, hi = TWO_PI, 0.0
    for _ in range(n):
        x, y = y, (alpha + y) / x
        ex, ey = x - omega, y - omega
        step = atan2(ex * dy - ey * dx, dx * ex + dy * ey)
        if step <= 0.0:
            if ex == 0.0 and ey == 0.0:
                raise NumericalCorruptionError("orbit reached the fixed point")
            step += TWO_PI
        total += step
        if step < lo:
            lo = step
        if step > hi:
            hi = step
        dx, dy = ex, ey
    return total, lo, hi, x, y


def estimate_rotation(
    params: LynessParams,
    v: float | None = None,
    n_iters: int = 10**6,
    seed: Iterable[Real] | None = None,
    *,
    refine: bool = False,
) -> RotationEstimate:
    """Rotation number of the map on the level curve V = v.

    The orbit starts at the far diagonal point of the curve unless an explicit
    ``seed`` is given, in which case ``v`` defaults to V(seed).  With
    ``refine=True`` a second pass tests the best rational approximations of the
    first estimate for an exact return and, if one closes to 1e-9 relative,
    reports that fraction.
    """
    if n_iters < MIN_ITERS:
        raise ValueError(f"n_iters must be at least {MIN_ITERS}, got {n_iters}")
    a = float(params.alpha)
    w = params.omega
    if seed is None:
        if v is None:
            raise ValueError("either v or seed is required")
        if _require_level(params, v):
            raise DomainError("the minimum level is a single point; rotation is undefined there")
        _, far = diagonal_roots(params, v)
        x = y = far
    else:
        x, y = (float(c) for c in seed)
        _check_positive(x, y)
        v_seed = float(invariant_V((x, y), params))
        if v is None:
            v = v_seed
        elif not math.isclose(v, v_seed, rel_tol=1e-9):
            raise DomainError(f"seed lies on level {v_seed}, not {v}")
        if _require_level(params, v):
            raise DomainError("the minimum level is a single point; rotation is undefined there")

    total, lo, hi, _, _ = _wind(a, w, x, y, n_iters)
    est = RotationEstimate(
        rho=total / (TWO_PI * n_iters),
        iterations=n_iters,
        stderr_bound=1.0 / n_iters,
        alpha=a,
        v=float(v),
        min_advance=lo,
        max_advance=hi,
    )
    if refine:
        est = _refine(est, params, x, y)
    return est


def _convergents(value: float, max_den: int) -> list[Fraction]:
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    rem = value
    for _ in range(64):
        a = math.floor(rem)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            break
        out.append(Fraction(h1, k1))
        frac = rem - a
        if frac < 1e-15:
            break
        rem = 1.0 / frac
    return out


def _refine(est: RotationEstimate, params: LynessParams, x: float, y: float) -> RotationEstimate:
    a = float(params.alpha)
    scale = math.hypot(x, y)
    max_den = max(2, int(math.sqrt(est.iterations)))
    for frac in _convergents(est.rho, max_den):
        if abs(float(frac) - est.rho) > est.stderr_bound:
            continue
        q = frac.denominator
        px, py = x, y
        for _ in range(q):
            px, py = py, (a + py) / px
        if math.hypot(px - x, py - y) <= 1e-9 * scale:
            return RotationEstimate(
                rho=float(frac),
                iterations=est.iterations,
                stderr_bound=est.stderr_bound,
                alpha=est.alpha,
                v=est.v,
                min_advance=est.min_advance,
                max_advance=est.max_advance,
                rational=frac,
            )
    return est


def rho_limit_at_minimum(params: LynessParams) -> float:
    """Limit of the rotation number as the curve shrinks to the fixed point.

    The linearization there is a rotation by theta with cos(theta) = 1/(2 omega),
    i.e. arccos(1/(1 + sqrt(1 + 4 alpha))) / (2 pi).
    """
    return math.acos(1.0 / (2.0 * params.omega)) / TWO_PI


def rho_asymptotic(params: LynessParams, v: float) -> float:
    """Large-v approximation ln v / (5 ln v - ln alpha); exactly 1/5 at alpha = 1."""
    a = float(params.alpha)
    if not a > 0:
        raise DomainError("the asymptotic formula needs alpha > 0")
    if not v > max(params.v_min, 1.0):
        raise DomainError(f"v must exceed max(v_min, 1) = {max(params.v_min, 1.0)}")
    lv = math.log(v)
    return lv / (5.0 * lv - math.log(a))


@dataclass(frozen=True)
class OpenInterval:
    lo: Fraction
    hi: Fraction

    def __contains__(self, value: float) -> bool:
        return float(self.lo) < value < float(self.hi)

    def margin(self, value: float) -> float:
        """Distance from ``value`` to the nearer end point (negative when outside)."""
        return min(value - float(self.lo), float(self.hi) - value)


def rho_bounds(params: LynessParams) -> OpenInterval:
    """(1/6, 1/5) for 0 < alpha < 1 and (1/5, 1/4) for alpha > 1."""
    a = params.alpha
    if a == 0 or a == 1:
        raise DomainError("rotation bounds exclude alpha = 0 and alpha = 1, where rho is constant")
    if a < 1:
        return OpenInterval(Fraction(1, 6), Fraction(1, 5))
    return OpenInterval(Fraction(1, 5), Fraction(1, 4))


def expected_trend(params: LynessParams) -> str:
    a = params.alpha
    if a == 0 or a == 1:
        return "constant"
    return "increasing" if a < 1 else "decreasing"


@dataclass(frozen=True)
class PairComparison:
    index: int
    diff: float
    margin: float  # |diff| minus the summed error bounds

    @property
    def distinguishable(self) -> bool:
        return self.margin > 0


@dataclass(frozen=True)
class MonotonicityReport:
    expected: str
    pairs: tuple[PairComparison, ...]

    @property
    def n_increasing(self) -> int:
        return sum(1 for p in self.pairs if p.distinguishable and p.diff > 0)

    @property
    def n_decreasing(self) -> int:
        return sum(1 for p in self.pairs if p.distinguishable and p.diff < 0)

    @property
    def indistinguishable(self) -> list[int]:
        return [p.index for p in self.pairs if not p.distinguishable]

    @property
    def violations(self) -> list[PairComparison]:
        """Distinguishable pairs moving against the expected direction."""
        if self.expected == "increasing":
            return [p for p in self.pairs if p.distinguishable and p.diff < 0]
        if self.expected == "decreasing":
            return [p for p in self.pairs if p.distinguishable and p.diff > 0]
        return [p for p in self.pairs if p.distinguishable]

    @property
    def min_margin(self) -> float:
        return min((p.margin for p in self.pairs), default=math.inf)

    @property
    def verdict(self) -> str:
        if not self.pairs:
            return "empty"
        if all(p.distinguishable for p in self.pairs):
            if all(p.diff > 0 for p in self.pairs):
                return "strictly increasing"
            if all(p.diff < 0 for p in self.pairs):
                return "strictly decreasing"
            return "not monotone"
        if self.violations:
            return "not monotone"
        return "monotone up to estimator error"


def monotonicity_report(estimates: Sequence[RotationEstimate], expected: str) -> MonotonicityReport:
    pairs = []
    for i in range(len(estimates) - 1):
        e0, e1 = estimates[i], estimates[i + 1]
        diff = e1.rho - e0.rho
        pairs.append(PairComparison(i, diff, abs(diff) - (e0.stderr_bound + e1.stderr_bound)))
    return MonotonicityReport(expected, tuple(pairs))


@dataclass(frozen=True)
class RhoScan:
    alpha: float
    estimates: tuple[RotationEstimate, ...]
    report: MonotonicityReport = field(repr=False)


def _scan_point(args):
    alpha, v, n_iters = args
    return estimate_rotation(LynessParams(alpha), v, n_iters)


def default_workers() -> int:
    """Worker cap from LYNESS_THREADS, defaulting to 1 (serial)."""
    raw = os.environ.get("LYNESS_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise DomainError(f"LYNESS_THREADS must be an integer, got {raw!r}") from None


def scan_rho(
    params: LynessParams,
    v_grid: Sequence[float],
    n_iters: int,
    *,
    workers: int | None = None,
) -> RhoScan:
    """Rotation estimates over an increasing grid of levels plus a monotonicity report.

    Grid points are independent; with ``workers > 1`` they run in separate
    processes.  Results are always returned in grid order.
    """
    grid = [float(v) for v in v_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("v_grid must be strictly increasing")
    for v in grid:
        if _require_level(params, v):
            raise DomainError("grid values must exceed v_min")
    if workers is None:
        workers = default_workers()
    jobs = [(params.alpha, v, n_iters) for v in grid]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            estimates = list(pool.map(_scan_point, jobs))
    else:
        estimates = [_scan_point(job) for job in jobs]
    return RhoScan(float(params.alpha), tuple(estimates), monotonicity_report(estimates, expected_trend(params)))


def log_grid(lo: float, hi: float, steps: int) -> list[float]:
    """``steps`` log-spaced values from lo to hi inclusive."""
    if steps < 2:
        return [float(lo)]
    return [float(v) for v in np.geomspace(lo, hi, steps)]
