"""Exception and warning types shared across the library."""


class FracIterError(Exception):
    """Base class for all library errors."""


class DomainError(FracIterError, ValueError):
    """An input lies outside the mathematical domain of the operation."""


class BranchDomainError(DomainError):
    """A piecewise branch formula is undefined at the requested point."""


class ConvergenceError(FracIterError, RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class SingularMatrixError(ConvergenceError):
    """A pivot collapsed during elimination; the system has no stable solution."""


class DivergenceError(ConvergenceError):
    """An iterative refinement blew up instead of settling."""


class DegenerateChainError(ConvergenceError):
    """Too few usable interpolation points survived chain construction."""


class AbelGateError(ConvergenceError):
    """A prepared super-logarithm environment failed its shift-identity gate.

    Carries the worst observed residual in ``residual``.
    """

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class ConditioningWarning(UserWarning):
    """The solved system's estimated condition number is suspiciously large."""
