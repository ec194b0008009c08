"""The Lyness map f(x, y) = (y, (alpha + y) / x) on the open positive quadrant.

Everything here works in two arithmetics: plain floats (double precision) and
:class:`fractions.Fraction` for bit-exact orbit checks.  Functions return new
values and never mutate their inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, ExactOverflowError

Real = Union[float, int, Fraction]

DEFAULT_MAX_BITS = 4096


@dataclass(frozen=True, slots=True)
class Point2:
    """A point of the open positive quadrant.  Coordinates may be floats or Fractions."""

    x: Real
    y: Real

    def __post_init__(self) -> None:
        if not (self.x > 0 and self.y > 0):
            raise DomainError(f"point ({self.x}, {self.y}) is not in the open positive quadrant")

    def __iter__(self):
        yield self.x
        yield self.y

    def as_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)

    def norm(self) -> float:
        return math.hypot(float(self.x), float(self.y))


@dataclass(frozen=True)
class LynessParams:
    """Parameter alpha >= 0 with the derived fixed point data.

    ``omega`` is the positive root of w**2 - w - alpha, the fixed point is
    (omega, omega) and ``v_min`` = (omega + 1)**3 / omega is the value of the
    invariant there.  alpha = infinity is not representable; use
    :func:`normalized_infinite_alpha_step` for that case.
    """

    alpha: Real
    omega: float = field(init=False)
    v_min: float = field(init=False)

    def __post_init__(self) -> None:
        a = self.alpha
        if isinstance(a, bool) or not isinstance(a, (int, float, Fraction)):
            raise DomainError(f"alpha must be a real number, got {a!r}")
        if isinstance(a, float) and math.isinf(a):
            raise DomainError("alpha = inf has no finite parameters; use normalized_infinite_alpha_step")
        if isinstance(a, float) and math.isnan(a):
            raise DomainError("alpha is NaN")
        if a < 0:
            raise DomainError(f"alpha must be nonnegative, got {a}")
        omega = (1.0 + math.sqrt(1.0 + 4.0 * float(a))) / 2.0
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "v_min", (omega + 1.0) ** 3 / omega)

    @property
    def fixed_point(self) -> Point2:
        return Point2(self.omega, self.omega)

    @property
    def exact_alpha(self) -> Fraction:
        return Fraction(self.alpha)


@dataclass(frozen=True)
class OrbitRecord:
    """Seed plus the iterates f^0(seed), ..., f^n(seed)."""

    seed: Point2
    iterates: tuple[Point2, ...]
    alpha: Real

    def __len__(self) -> int:
        return len(self.iterates)

    @property
    def xs(self) -> list[Real]:
        """The scalar Lyness sequence: x-projection of the planar orbit."""
        return [p.x for p in self.iterates]

    def first_return(self, rel_tol: float = 0.0) -> int | None:
        """Smallest k >= 1 with f^k(seed) == seed, or None within the recorded span.

        ``rel_tol=0`` demands bit-exact equality (the right choice for Fractions).
        """
        s = self.seed
        scale = s.norm()
        for k, p in enumerate(self.iterates[1:], start=1):
            if rel_tol == 0.0:
                if p.x == s.x and p.y == s.y:
                    return k
            elif math.hypot(float(p.x) - float(s.x), float(p.y) - float(s.y)) <= rel_tol * scale:
                return k
        return None


def _check_positive(x, y) -> None:
    if not (x > 0 and y > 0):
        raise DomainError(f"point ({x}, {y}) is not in the open positive quadrant")


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite value {value} has no exact representation")
        return Fraction(value)
    raise DomainError(f"cannot convert {value!r} to an exact rational")


def _check_bits(value: Fraction, max_bits: int | None) -> None:
    if max_bits is None:
        return
    if value.numerator.bit_length() > max_bits or value.denominator.bit_length() > max_bits:
        raise ExactOverflowError(
            f"exact iterate exceeds {max_bits} bits "
            f"(numerator {value.numerator.bit_length()}, denominator {value.denominator.bit_length()})"
        )


def lyness_step(p: Iterable[Real], params: LynessParams) -> Point2:
    """One step of the map: (x, y) -> (y, (alpha + y) / x)."""
    x, y = p
    _check_positive(x, y)
    return Point2(y, (params.alpha + y) / x)


def lyness_inverse(p: Iterable[Real], params: LynessParams) -> Point2:
    """Inverse map: (x, y) -> ((alpha + x) / y, x)."""
    x, y = p
    _check_positive(x, y)
    return Point2((params.alpha + x) / y, x)


def lyness_step_exact(p: Iterable, alpha, max_bits: int | None = DEFAULT_MAX_BITS) -> tuple[Fraction, Fraction]:
    """Exact image of ``p`` under the map with rational ``alpha``.

    Fractions are always held in lowest terms by the standard library.
    """
    x, y = (_to_fraction(c) for c in p)
    a = _to_fraction(alpha)
    if a < 0:
        raise DomainError(f"alpha must be nonnegative, got {a}")
    _check_positive(x, y)
    z = (a + y) / x
    _check_bits(z, max_bits)
    return y, z


def lyness_inverse_exact(p: Iterable, alpha, max_bits: int | None = DEFAULT_MAX_BITS) -> tuple[Fraction, Fraction]:
    x, y = (_to_fraction(c) for c in p)
    a = _to_fraction(alpha)
    if a < 0:
        raise DomainError(f"alpha must be nonnegative, got {a}")
    _check_positive(x, y)
    w = (a + x) / y
    _check_bits(w, max_bits)
    return w, x


def normalized_infinite_alpha_step(p: Iterable[Real]) -> Point2:
    """The alpha -> infinity limit after rescaling x_n = sqrt(alpha) * y_n: (x, y) -> (y, 1/x).

    Works unchanged on Fractions, where 1/x stays exact.
    """
    x, y = p
    _check_positive(x, y)
    one = Fraction(1) if isinstance(x, Fraction) else 1.0
    return Point2(y, one / x)


def iterate(
    seed: Iterable[Real],
    n: int,
    params: LynessParams,
    *,
    exact: bool = False,
    max_bits: int | None = DEFAULT_MAX_BITS,
) -> OrbitRecord:
    """Orbit of ``seed`` of length n + 1 (the seed itself is ``iterates[0]``).

    With ``exact=True`` the seed and alpha are converted to Fractions and every
    iterate is checked against ``max_bits``; non-periodic rational orbits grow
    without bound and eventually raise :class:`ExactOverflowError`.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    sx, sy = seed
    if exact:
        a = params.exact_alpha
        x, y = _to_fraction(sx), _to_fraction(sy)
        start = Point2(x, y)
        points = [start]
        for _ in range(n):
            x, y = lyness_step_exact((x, y), a, max_bits)
            points.append(Point2(x, y))
    else:
        a = params.alpha
        x, y = sx, sy
        start = Point2(x, y)
        points = [start]
        for _ in range(n):
            x, y = y, (a + y) / x
            points.append(Point2(x, y))
    return OrbitRecord(seed=start, iterates=tuple(points), alpha=params.alpha)


def iterate_normalized_infinite(seed: Iterable[Real], n: int) -> OrbitRecord:
    """Orbit under the normalized alpha = infinity map (period 4)."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    start = Point2(*seed)
    points = [start]
    p = start
    for _ in range(n):
        p = normalized_infinite_alpha_step(p)
        points.append(p)
    return OrbitRecord(seed=start, iterates=tuple(points), alpha=math.inf)


def iterate_arrays(xs: Sequence[float], ys: Sequence[float], n: int, alpha: float):
    """Vectorized float orbits of many seeds at once.

    Yields ``(x, y)`` numpy arrays for steps 1..n.  The arrays are fresh at every
    step, so callers may keep references.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("all seeds must lie in the open positive quadrant")
    for _ in range(n):
        x, y = y, (alpha + y) / x
        yield x, y


def jacobian_at_fixed_point(params: LynessParams) -> np.ndarray:
    """Derivative of the map at (omega, omega): [[0, 1], [-1, 1/omega]].

    Its determinant is 1 and its trace is 1/omega = 2 cos(theta), so the
    eigenvalues are exp(+-i theta) with cos(theta) = 1 / (2 omega).
    """
    return np.array([[0.0, 1.0], [-1.0, 1.0 / params.omega]])
