"""Exception types shared across the package."""


class K3latError(ValueError):
    """Base class for all errors raised by k3lat."""


class DimensionError(K3latError):
    """Shapes of vectors/matrices do not match."""


class DegenerateError(K3latError):
    """An operation met a degenerate (determinant zero) form."""


class GlueError(K3latError):
    """A glue vector violates integrality or evenness constraints."""


class OddLatticeError(K3latError):
    """A quadratic discriminant form was requested for an odd lattice."""


class GuardError(K3latError):
    """A configurable size guard was exceeded."""


class PatternError(K3latError):
    """An input does not match the shape required by a reduction step."""


class SearchExhausted(K3latError):
    """A certificate search ran out of candidates."""
