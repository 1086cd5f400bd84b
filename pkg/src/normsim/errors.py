"""Exception types shared across the package.

The CLI maps these onto exit codes: InputError -> 2 (usage/config),
DataError and subclasses -> 3 (data/identifiability).
"""


class InputError(ValueError):
    """Invalid argument, dimension mismatch, or malformed configuration."""


class DataError(ValueError):
    """Input data unfit for the requested computation."""


class ParseError(DataError):
    """A file could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IdentifiabilityError(DataError):
    """The data carry no information about the requested parameters."""
