"""Exception taxonomy shared by the engines and the CLI."""


class SympackError(Exception):
    """Base class for all library errors."""


class InvalidPolygon(SympackError, ValueError):
    pass


class BasisMismatch(SympackError, ValueError):
    pass


class RangeError(SympackError, ValueError):
    """The requested input lies outside what the method covers."""


class BeyondDemazureRange(RangeError):
    """More than eight blow-up points would be needed; the exceptional set is infinite."""


class RegimeViolation(RangeError):
    """A construction was requested outside the parameter regime it is valid for."""


class VerificationFailure(SympackError):
    """An input configuration is covered by the method but its claim is false."""
