"""Exception types shared across the package."""


class BlochSpecError(Exception):
    """Base class for all library errors."""


class PeriodMismatchError(BlochSpecError):
    """Two periodic objects with different periods were combined."""


class ShapeError(BlochSpecError):
    """An operator does not have the required monic lower-triangular shape."""


class CoprimalityError(BlochSpecError):
    """The period and the operator order fail the gcd(n, k+1) = 1 requirement."""


class DegenerateError(BlochSpecError):
    """Input is outside general position (rank drop, inconsistent division, ...)."""


class TruncationError(BlochSpecError):
    """A series was not computed far enough to certify the requested identity."""


class VerificationError(BlochSpecError):
    """An exact identity that should hold was falsified."""


class FormatError(BlochSpecError):
    """Malformed serialized input."""
