"""Exception hierarchy shared by all flatmass modules."""

from __future__ import annotations


class FlatmassError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FlatmassError, ValueError):
    """An argument lies outside the domain of the operation."""


class DimensionError(DomainError):
    """Manifold dimension below 3."""


class RefinementError(FlatmassError):
    """Adaptive quadrature hit its depth limit.

    The last (unconverged) estimate is kept on ``estimate``.
    """

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


class SingularityError(FlatmassError):
    """Integrand blows up faster than the square-root substitution can absorb."""


class BracketError(FlatmassError, ValueError):
    """Root bracket does not straddle a sign change."""


class HorizonError(DomainError):
    """Hawking mass reaches half the envelope, so the graph slope is infinite."""


class MinimalSurfaceError(DomainError):
    """Warp factor derivative is non-positive at an interior sample."""


class TruncationError(FlatmassError):
    """The profile's truncation radius is too small for the requested window."""


class CapViolationError(DomainError):
    """2*delta is not below the envelope at the requested radius."""


class ConstructionError(FlatmassError):
    """A family constructor was given parameters it cannot realise."""


class ClassError(FlatmassError):
    """Profile fails class membership and cannot be used for bounds."""


class SpecError(FlatmassError):
    """A metric spec or report file is malformed."""
