"""Exception types shared across the package."""


class SolitonError(Exception):
    """Base class for every error raised by :mod:`spinsoliton`."""


class ParameterError(SolitonError, ValueError):
    """Invalid physical or numerical input. ``key`` names the offending field."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class RegimeMismatchError(ParameterError):
    """Requested soliton kind is not supported by the sign of c1."""


class StepSizeError(ParameterError):
    """Time step exceeds the explicit stability bound."""


class GridMismatchError(ParameterError):
    pass


class ConfigParseError(ParameterError):
    def __init__(self, message, line=None, key=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, key=key)
        self.line = line


class SchemaError(SolitonError, ValueError):
    """A persisted file does not match the expected layout."""


class DegenerateProfileError(SolitonError, ValueError):
    pass


class InsufficientPointsError(SolitonError, ValueError):
    pass


class NumericBlowupError(SolitonError, ArithmeticError):
    """Non-finite or overflowing amplitude during evolution."""

    def __init__(self, message, time=None, index=None):
        super().__init__(message)
        self.time = time
        self.index = index
