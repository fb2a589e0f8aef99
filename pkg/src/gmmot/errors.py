"""Exception hierarchy shared across the package."""


class GmmOtError(Exception):
    """Base class for all errors raised by gmmot."""


class InvalidMatrix(GmmOtError):
    """Matrix input is not usable (non-square, non-finite entries)."""


class NotPSD(GmmOtError):
    """Symmetric matrix has an eigenvalue below the negative tolerance."""


class DimError(GmmOtError):
    """Dimensions of two objects do not agree."""


class DomainError(GmmOtError):
    """Scalar argument outside its admissible range."""


class ConvergenceError(GmmOtError):
    """Iterative scheme failed to reach tolerance within the iteration cap.

    Carries the last residual in ``residual``.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class InvalidModel(GmmOtError):
    """Mixture weights or components violate the model invariants."""


class SingularDensity(GmmOtError):
    """Density evaluation requested for a mixture with a singular component."""


class ParseError(GmmOtError):
    """Malformed model document; ``location`` points at the offending field."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{message} (at {location})" if location else message)
        self.location = location


class InfeasibleMarginals(GmmOtError):
    """Transportation marginals do not define a feasible problem."""


class SolverError(GmmOtError):
    """LP solver stalled or failed to certify optimality."""


class ResourceError(GmmOtError):
    """Requested computation exceeds the configured size cap."""
