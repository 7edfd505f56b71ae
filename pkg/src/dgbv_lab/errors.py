from __future__ import annotations


class DgbvError(Exception):
    """Base class for every error raised by dGBV Lab."""


class GradingError(DgbvError):
    """Raised when degrees, parities or declared shifts are inconsistent."""


class ScalarParseError(DgbvError):
    """Raised when an exact scalar literal cannot be parsed."""


class LinearAlgebraError(DgbvError):
    """Raised for singular systems or invalid inner products."""


class PreconditionError(DgbvError):
    """Raised when an operation's mathematical precondition does not hold."""

    def __init__(self, message: str, residual: object | None = None) -> None:
        super().__init__(message)
        self.residual = residual


class KahlerIdentityError(PreconditionError):
    """Raised when a bigraded model fails the Kähler identities."""


class ModelFileError(DgbvError):
    """Raised when a model or solution document is malformed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column
