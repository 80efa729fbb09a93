"""Exception types raised by the package."""


class UnsupportedPriorError(TypeError):
    """The operation needs a density but the prior has none (discrete or singular)."""


class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class DegenerateInputError(ValueError):
    """Not enough, or non-positive, data for a log-log rate fit."""


class ConfigError(ValueError):
    """A suite or CLI configuration is invalid."""
