"""Exception hierarchy shared across the solver package."""


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class NotInterior(SolverError):
    """A point required to be strictly inside the cone is not."""


class DomainError(SolverError):
    """A scalar argument lies outside the valid domain."""


class SingularSystem(SolverError):
    """A linear system that should be nonsingular failed to factorize."""


class SingularModel(SolverError):
    """The cubic model's metric block is not positive definite."""


class NoConvergence(SolverError):
    """An iterative scalar solver exhausted its iteration budget."""


class ObjectiveFailure(SolverError):
    """The objective oracle returned a non-finite value at an interior point."""


class NoInitialPoint(SolverError):
    """The problem carries no strictly feasible starting point."""


class MaxIterExceeded(SolverError):
    """An inner procedure exceeded its iteration cap."""


class NoSecondOrderOracle(SolverError):
    """A second-order operation was requested but no Hessian oracle exists."""


class ParseError(SolverError):
    """A problem file could not be parsed."""


class ValidationError(SolverError):
    """A problem file parsed but violates a structural invariant.

    ``code`` is a stable machine-readable identifier, e.g. ``"dim_mismatch"``,
    ``"rank_deficient"``, ``"infeasible_init"``.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
