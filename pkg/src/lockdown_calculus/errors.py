"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class NumericError(ArithmeticError):
    """A computation produced a non-finite intermediate value."""


class SolverError(RuntimeError):
    """A root finder exhausted its iteration budget."""


class ConfigError(ValueError):
    """A run configuration could not be parsed or validated."""
