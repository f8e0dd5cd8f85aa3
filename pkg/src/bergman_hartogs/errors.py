"""Exception hierarchy shared by every module of the package."""


class BergmanError(Exception):
    """Base class for all errors raised by :mod:`bergman_hartogs`."""


class DomainError(BergmanError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class SingularityError(BergmanError, ZeroDivisionError):
    """Evaluation hit a pole or a vanishing denominator."""


class ConvergenceError(BergmanError, ArithmeticError):
    """A series or quadrature failed to converge.

    ``report`` carries whatever partial diagnostics were available when the
    iteration gave up (an :class:`~bergman_hartogs.hartogs.EvalReport` for the
    series engine, ``None`` for quadrature).
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
