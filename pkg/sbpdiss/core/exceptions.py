"""Exception hierarchy shared by the numerics core and the CLI.

Every error carries the process exit code the CLI maps it to.
"""

from __future__ import annotations

from typing import Any


class SbpDissError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1

    def to_record(self) -> dict[str, Any]:
        return {"error": self.__class__.__name__, "message": str(self), "exit_code": self.exit_code}


# Configuration -------------------------------------------------------------------------


class ConfigError(SbpDissError):
    exit_code = 2


class ConfigParseError(ConfigError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column

    def to_record(self) -> dict[str, Any]:
        return {**super().to_record(), "line": self.line, "column": self.column}


class ConfigValidationError(ConfigError):
    def __init__(self, errors: list[dict[str, str]]) -> None:
        summary = "; ".join(f"{item['field']}: {item['reason']}" for item in errors)
        super().__init__(f"Invalid experiment config: {summary}")
        self.errors = errors

    @property
    def fields(self) -> list[str]:
        return [item["field"] for item in self.errors]

    def to_record(self) -> dict[str, Any]:
        return {**super().to_record(), "fields": self.errors}


# Operators -----------------------------------------------------------------------------


class OperatorError(SbpDissError):
    exit_code = 2


class UnsupportedFamily(OperatorError):
    pass


class InsufficientNodes(OperatorError):
    pass


class DegreeUnsupported(OperatorError):
    pass


class ClosureError(OperatorError):
    """A boundary closure failed its SBP or accuracy check."""

    exit_code = 3


# Dissipation ---------------------------------------------------------------------------


class DissipationError(SbpDissError):
    exit_code = 2


class SingularStencil(DissipationError):
    pass


class OrderTooHigh(DissipationError):
    pass


class NegativeCoefficient(DissipationError):
    pass


class DimensionMismatch(DissipationError):
    pass


# Physics and time integration ----------------------------------------------------------


class NonAdmissibleState(SbpDissError):
    exit_code = 4


class NoConvergence(SbpDissError):
    exit_code = 4


class CrashDetected(SbpDissError):
    """Raised inside the integrator when a run stops being physical.

    The integrator catches it and reports the crash as data.
    """

    exit_code = 4

    def __init__(self, time: float, cause: str) -> None:
        super().__init__(f"Crash at t={time:.17g}: {cause}")
        self.time = time
        self.cause = cause

    def to_record(self) -> dict[str, Any]:
        return {**super().to_record(), "time": self.time, "cause": self.cause}


class InvariantViolation(SbpDissError):
    exit_code = 3


__all__ = [
    "SbpDissError",
    "ConfigError",
    "ConfigParseError",
    "ConfigValidationError",
    "OperatorError",
    "UnsupportedFamily",
    "InsufficientNodes",
    "DegreeUnsupported",
    "ClosureError",
    "DissipationError",
    "SingularStencil",
    "OrderTooHigh",
    "NegativeCoefficient",
    "DimensionMismatch",
    "NonAdmissibleState",
    "NoConvergence",
    "CrashDetected",
    "InvariantViolation",
]
