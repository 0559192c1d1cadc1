"""Exception hierarchy shared by the evaluators and the CLI."""


class VinbergError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(VinbergError, ValueError):
    """Inadmissible model parameters (dimensions, (kappa, gamma), profile)."""


class DimensionError(ParameterError):
    """Inconsistent daisy-graph dimensions."""


class DomainError(VinbergError, ValueError):
    """Argument outside the domain of a function (closure of S, Im z <= 0, ...)."""


class BranchCutError(DomainError):
    """Argument lies on the cut of a principal power or logarithm."""


class PoleError(DomainError):
    """Argument is a pole of the evaluated function."""


class ConvergenceError(VinbergError, RuntimeError):
    """An iterative solver failed; ``diagnostics`` carries the history."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics if diagnostics is not None else {}
