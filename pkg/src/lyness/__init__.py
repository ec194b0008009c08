"""Lyness map dynamics: exact orbits, the invariant and its level curves,
rotation numbers, achievable periods and frieze patterns."""

__version__ = "0.1.0"

from .core import (
    LynessParams,
    OrbitRecord,
    Point2,
    iterate,
    iterate_normalized_infinite,
    lyness_inverse,
    lyness_inverse_exact,
    lyness_step,
    lyness_step_exact,
    normalized_infinite_alpha_step,
)
from .errors import (
    BelowMinimumLevelError,
    DomainError,
    ExactOverflowError,
    FriezeError,
    LynessError,
    NumericalCorruptionError,
    RelationError,
)
from .frieze import FriezePattern, build_from_diagonal, verify_pattern
from .invariant import (
    exceptional_levels,
    interval_bounds,
    invariant_V,
    level_curve,
    sample_level_curve,
)
from .periodic import critical_alpha, period_set, special_level, verify_closure
from .rotation import RotationEstimate, estimate_rotation, rho_asymptotic, rho_bounds, rho_limit_at_minimum, scan_rho

__all__ = [
    "BelowMinimumLevelError",
    "DomainError",
    "ExactOverflowError",
    "FriezeError",
    "FriezePattern",
    "LynessError",
    "LynessParams",
    "NumericalCorruptionError",
    "OrbitRecord",
    "Point2",
    "RelationError",
    "RotationEstimate",
    "build_from_diagonal",
    "critical_alpha",
    "estimate_rotation",
    "exceptional_levels",
    "interval_bounds",
    "invariant_V",
    "iterate",
    "iterate_normalized_infinite",
    "level_curve",
    "lyness_inverse",
    "lyness_inverse_exact",
    "lyness_step",
    "lyness_step_exact",
    "normalized_infinite_alpha_step",
    "period_set",
    "rho_asymptotic",
    "rho_bounds",
    "rho_limit_at_minimum",
    "sample_level_curve",
    "scan_rho",
    "special_level",
    "verify_closure",
    "verify_pattern",
]
