"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


class NumericalError(RuntimeError):
    """Raised when a numerical routine cannot meet its accuracy target."""


class ConfigError(ValueError):
    """Raised when an experiment configuration cannot be parsed or is incomplete."""
