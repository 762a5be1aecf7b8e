"""Exception hierarchy shared by the library and the command line."""


class PlumbError(Exception):
    """Base class for every error raised by :mod:`plumbfloer`."""

    exit_code = 1


class ParseError(PlumbError, ValueError):
    """Malformed textual or JSON input."""

    exit_code = 1


class PreconditionError(PlumbError, ValueError):
    """Well-formed input outside the domain of an operation."""

    exit_code = 2


class ConsistencyError(PlumbError, RuntimeError):
    """Two independent computations disagree; indicates a bug, never user error."""

    exit_code = 3

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details
