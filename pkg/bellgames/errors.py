"""
Exception hierarchy for bellgames.
Every error carries the exit code the command line front end reports for it.
"""


class BellGamesError(Exception):
    """
    Base class for all bellgames errors. Unexpected failures map to exit code 3.
    """

    exit_code = 3


class ValidationError(BellGamesError, ValueError):
    """
    Raised when a value breaks an invariant of the type it is used to build.
    """

    exit_code = 1


class DimensionError(ValidationError):
    pass


class NotFoundError(ValidationError, KeyError):
    def __str__(self):
        # KeyError quotes its argument, keep the plain message
        return str(self.args[0]) if self.args else ""


class ParseError(ValidationError):
    """
    Raised by the file readers, always pointing to the offending line.
    """

    def __init__(self, message: str, path: str = "<string>", line: int = 0):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class CapacityError(BellGamesError):
    exit_code = 2


class IntegrityError(BellGamesError, RuntimeError):
    exit_code = 3
