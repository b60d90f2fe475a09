"""Exception types shared across the package.

Every error raised deliberately by this package derives from
:class:`EigtailError`, so callers can catch the package's failures without
also swallowing programming errors.  Numerical routines that fail carry
their best partial result on the exception instance.
"""

from __future__ import annotations


class EigtailError(Exception):
    """Base class for all package-specific errors."""


class DomainError(EigtailError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedWeightError(EigtailError, ValueError):
    """The operation has no implementation for this weight family."""


class DegeneracyError(EigtailError, ArithmeticError):
    """A matrix or system that must be nonsingular turned out singular."""


class InitializationError(EigtailError, ValueError):
    """A sampler or solver could not be started from a valid state."""


class InconclusiveStudyError(EigtailError, RuntimeError):
    """Too much of a study's data is censored for its fit to be meaningful."""


class AccuracyError(EigtailError, ArithmeticError):
    """Numerical integration could not reach the requested tolerance.

    Attributes
    ----------
    estimate:
        Best available value of the integral, or ``None``.
    error_bound:
        Estimated absolute error of ``estimate``, or ``None``.
    """

    def __init__(self, message: str, estimate: float | None = None,
                 error_bound: float | None = None) -> None:
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class ConvergenceError(EigtailError, ArithmeticError):
    """An iterative solver hit its iteration cap before converging.

    Attributes
    ----------
    last_iterate:
        The final iterate produced before giving up, or ``None``.
    history:
        Objective values per iteration, or ``None``.
    """

    def __init__(self, message: str, last_iterate=None, history=None) -> None:
        super().__init__(message)
        self.last_iterate = last_iterate
        self.history = history
