"""Exception hierarchy."""


class SliceQuatError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SliceQuatError, ValueError):
    """A point or configuration lies outside the domain of an operation."""


class SingularityError(SliceQuatError, ZeroDivisionError):
    """Evaluation hit a zero sphere of a denominator.

    ``sphere`` holds ``(alpha, beta)`` of the offending sphere when known.
    """

    def __init__(self, message, sphere=None):
        super().__init__(message)
        self.sphere = sphere


class PoleError(SingularityError):
    """A closed form has a genuine pole at the requested argument."""


class DiagonalError(DomainError):
    """Two imaginary units that must differ coincide."""


class DegenerateError(SliceQuatError, ValueError):
    """The zero polynomial was given where a nonzero one is required."""


class NoZeroError(SliceQuatError, ValueError):
    """No zero lies on the requested sphere."""


class NotHarmonicError(SliceQuatError, ValueError):
    """A polynomial that must be harmonic is not."""


class PreconditionError(SliceQuatError, ValueError):
    """Hypotheses of a formula are violated (e.g. a zero on the boundary)."""


class BoundaryZeroError(PreconditionError):
    """A zero or pole lies on (or too close to) the boundary sphere."""
