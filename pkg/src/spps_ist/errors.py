"""Exception hierarchy shared by all stages of the transform."""


class NFTError(Exception):
    """Base class for every error raised by this package."""


class InvalidGridError(NFTError):
    pass


class PotentialSpecError(NFTError):
    pass


class IngestionError(NFTError):
    pass


class DomainSelectionError(NFTError):
    pass


class BaseSolveError(NFTError):
    """Picard iteration for the base Jost solutions did not converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularBaseError(NFTError):
    pass


class InstabilityError(NFTError):
    """Coefficient recurrence blew up; ``last_stable_order`` is the last good row."""

    def __init__(self, message, last_stable_order):
        super().__init__(message)
        self.last_stable_order = last_stable_order


class SpectralDomainError(NFTError):
    pass


class PoleError(NFTError):
    pass


class DegenerateEigenvectorError(NFTError):
    pass


class ConfigurationError(NFTError):
    pass


class IllConditioningError(NFTError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class RecoverySingularityError(NFTError):
    def __init__(self, message, x_values=()):
        super().__init__(message)
        self.x_values = list(x_values)


class ParseError(NFTError):
    def __init__(self, message, line=None, field=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field {field!r}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.line = line
        self.field = field
