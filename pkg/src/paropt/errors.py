"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration: bad step sizes, inverted bounds, bad options."""


class DegenerateBoundsError(ConfigError):
    """A coordinate's feasible interval is too narrow to place any nonzero
    finite-difference step."""


class DimensionError(ValueError):
    """A vector's length does not match the problem dimension."""


class EvaluationError(RuntimeError):
    """The objective (or gradient) produced a non-finite result.

    Carries the offending parameter vector so callers can report or retry.
    The optimizer treats this as retryable inside a line search and as a
    hard failure at the initial point.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class DatasetError(ValueError):
    """A dataset file could not be parsed."""
