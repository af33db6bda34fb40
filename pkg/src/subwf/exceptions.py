"""Exception types shared across the package."""


class SubwfError(Exception):
    """Base class for all library errors."""


class DimensionError(SubwfError, ValueError):
    """Operands have incompatible shapes or an empty dimension."""


class ConvergenceError(SubwfError, RuntimeError):
    """An iterative solver exhausted its budget.

    Carries the last residual so callers can judge how close it got.
    """

    def __init__(self, message: str, residual: float | None = None,
                 iterations: int | None = None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ConfigError(SubwfError, ValueError):
    """Invalid configuration (bad key, type, or parameter combination)."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class InitializationError(SubwfError, RuntimeError):
    """Spectral initialization cannot proceed (e.g. nonpositive gamma)."""


class DivergenceError(SubwfError, RuntimeError):
    """Gradient descent produced a non-finite loss or gradient."""

    def __init__(self, message: str, iteration: int):
        super().__init__(message)
        self.iteration = iteration
