"""Exception types shared across the package."""


class DomainError(ValueError):
    """A mean, parameter or argument lies outside the admissible domain."""


class ConvergenceError(ArithmeticError):
    """An iterative numerical routine failed to reach its tolerance."""


class UnsupportedModeError(ValueError):
    """The requested mode needs a family property that is not available."""


class ConfigError(ValueError):
    """Invalid experiment configuration.

    ``line`` is the 1-based line number in the config file, when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
