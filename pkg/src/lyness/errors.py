"""Exception hierarchy shared by every module."""


class LynessError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LynessError, ValueError):
    """Input outside the open positive quadrant or outside an operation's domain."""


class BelowMinimumLevelError(DomainError):
    """Requested level value does not exceed the minimum of the invariant."""


class ExactOverflowError(LynessError, OverflowError):
    """Exact rational iterate exceeded the configured bit budget."""


class NumericalCorruptionError(LynessError, ArithmeticError):
    """A floating computation reached a state that is impossible in exact arithmetic."""


class FriezeError(LynessError, ValueError):
    """Seed cannot be realized as a frieze pattern, or a grid is malformed."""


class RelationError(LynessError, ValueError):
    """Values do not satisfy the relations required by an operation."""
