"""Exception types shared across the package.

The CLI maps these onto process exit codes: config/usage problems exit
with 2, numerical-accuracy problems with 3.  Statistical verification
failures are reported as data (pass/fail), not exceptions.
"""


class FsdeLabError(Exception):
    """Base class for all package errors."""


class DomainError(FsdeLabError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ContractError(FsdeLabError, ValueError):
    """Inputs violate a structural contract (shape/grid mismatch, too few paths)."""


class AccuracyError(FsdeLabError, RuntimeError):
    """A numerical routine could not meet its requested tolerance.

    Attributes
    ----------
    residual : float
        Best achieved error estimate.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class FactorizationError(FsdeLabError, RuntimeError):
    """A matrix factorization failed (e.g. covariance not PSD after round-off)."""


class DivergenceError(FsdeLabError, RuntimeError):
    """A time-stepping solution became non-finite.

    Attributes
    ----------
    first_bad_node : int
        Index of the first grid node with a non-finite value.
    """

    def __init__(self, message, first_bad_node=None):
        super().__init__(message)
        self.first_bad_node = first_bad_node


class NonConvergenceError(FsdeLabError, RuntimeError):
    """An iteration hit its cap before reaching tolerance.

    Attributes
    ----------
    history : list[float] | None
        Per-iteration error measures, when available.
    """

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else None


class StabilityError(FsdeLabError, RuntimeError):
    """A time integrator went unstable; the message recommends a step bound."""


class FitError(FsdeLabError, RuntimeError):
    """A kernel/mode fit exceeded its acceptable error."""


class ConfigError(FsdeLabError, ValueError):
    """A run configuration failed validation.

    Attributes
    ----------
    pointer : str
        JSON-pointer-style path to the offending field.
    """

    def __init__(self, message, pointer=""):
        super().__init__(message)
        self.pointer = pointer
