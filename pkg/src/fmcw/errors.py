"""Exception hierarchy shared by every stage of the toolkit."""


class FmcwError(Exception):
    """Base class for all errors raised by :mod:`fmcw`."""


class InvalidParamsError(FmcwError, ValueError):
    """A parameter object violates one of its invariants."""


class OutOfRangeError(FmcwError, ValueError):
    """A scalar argument falls outside the interval the operation accepts."""


class NyquistError(FmcwError, ValueError):
    """A requested signal cannot be represented at the configured sample rate."""


class DomainError(FmcwError, ValueError):
    """An inverse trigonometric argument left [-1, 1]."""


class InvalidAngleBinError(DomainError):
    """A detection sits on an angle bin that maps to no physical azimuth."""


class TooFewChirpsError(FmcwError, ValueError):
    pass


class SingularInnovationError(FmcwError, ArithmeticError):
    pass


class ConfigError(FmcwError):
    """Configuration could not be parsed or failed validation.

    ``field`` holds the dotted key path of the offending entry when known,
    ``line``/``column`` the position of a JSON syntax error.
    """

    def __init__(self, message, field=None, line=None, column=None):
        super().__init__(message)
        self.field = field
        self.line = line
        self.column = column


class StageError(FmcwError):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage, message):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
