"""Exception hierarchy shared by all modules."""


class DSGError(Exception):
    """Base class for every error raised by this package."""


class DomainError(DSGError, ValueError):
    """A parameter lies outside its admissible range."""


class DegenerateCriticalPointError(DSGError, ValueError):
    """A critical point has zero curvature and cannot be classified."""


class SolverError(DSGError, RuntimeError):
    """The static Newton solver failed to converge.

    Attributes
    ----------
    residual : float
        Sup-norm of the residual at the last accepted iterate.
    iterations : int
        Number of Newton iterations performed.
    """

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SingularStepError(SolverError):
    """The Newton Jacobian was singular, so no step could be computed."""


class InstabilityError(DSGError, ArithmeticError):
    """A fluctuation mode has non-positive squared frequency."""

    def __init__(self, message, omega_squared=float("nan"), index=-1):
        super().__init__(message)
        self.omega_squared = omega_squared
        self.index = index


class NumericalDegeneracyError(DSGError, ArithmeticError):
    """A reduced covariance violates the uncertainty bound beyond round-off."""


class FlatProfileError(DSGError, ValueError):
    """An energy profile has no maxima above the requested threshold."""
