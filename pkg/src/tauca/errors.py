"""Exception types raised across the package."""


class TauCAError(Exception):
    """Base class for all errors raised by tauca."""


class RangeError(TauCAError, ValueError):
    """A value or run left the range the representation can hold."""

    def __init__(self, message: str, step: int | None = None):
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)
        self.step = step


class SignError(TauCAError, ValueError):
    """The fixed sign pattern cannot represent the value with non-negative digits."""


class MixedRadixError(TauCAError, ValueError):
    """Operands disagree on the radix N or the truncation power p."""


class NonFiniteError(TauCAError, ArithmeticError):
    """A floating-point integration produced inf or nan."""


class GridError(TauCAError, ValueError):
    """A requested sample point lies outside a curve's covered range."""


class EmptyTraceError(TauCAError, ValueError):
    """A statistic was requested on a trace without any executed steps."""


class DegenerateFitError(TauCAError, ValueError):
    """A power-law fit received zero, negative or too few data points."""
