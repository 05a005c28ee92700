"""Exception hierarchy shared by all qres modules.

Public functions never raise bare ``ValueError``/``ArithmeticError``; they
raise one of the semantic classes below so callers (and the CLI exit-code
mapping) can distinguish bad inputs from numerical-accuracy failures.
"""


class QresError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(QresError, ValueError):
    """An input violates a documented precondition (domain, shape, range)."""


class AccuracyError(QresError, ArithmeticError):
    """A numerical routine could not reach the requested accuracy.

    Carries the best available estimate so callers can decide whether the
    partial result is still usable.
    """

    def __init__(self, message, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class ResolutionError(QresError):
    """A discretized result is too coarse to be meaningful (e.g. a posterior
    grid whose mass collapses into a single cell)."""


class UnboundedInformationError(DomainError):
    """The Fisher information diverges at the requested parameter point."""
