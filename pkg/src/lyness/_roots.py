"""Safeguarded bisection + Newton root polishing on a sign-changing bracket."""
from __future__ import annotations

import math
from typing import Callable


def bracketed_root(
    func: Callable[[float], float],
    deriv: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    coarse_rtol: float = 1e-3,
    rtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Root of ``func`` inside [lo, hi], where func(lo) and func(hi) differ in sign.

    Bisect until the bracket is ``coarse_rtol`` wide relative to its upper end,
    then take Newton steps, falling back to bisection whenever a step would
    leave the current bracket.  Stops once a step is below ``rtol`` relative.
    """
    flo, fhi = func(lo), func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    lo_positive = flo > 0

    def shrink(x: float, fx: float) -> None:
        nonlocal lo, hi
        if (fx > 0) == lo_positive:
            lo = x
        else:
            hi = x

    for _ in range(max_iter):
        if hi - lo <= coarse_rtol * abs(hi):
            break
        mid = 0.5 * (lo + hi)
        fm = func(mid)
        if fm == 0.0:
            return mid
        shrink(mid, fm)

    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = func(x)
        if fx == 0.0:
            return x
        shrink(x, fx)
        d = deriv(x)
        step = fx / d if d != 0.0 and math.isfinite(d) else math.inf
        x_new = x - step
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
            step = x - x_new
        if abs(step) <= rtol * abs(x_new) or hi - lo <= rtol * abs(hi):
            return x_new
        x = x_new
    return x
