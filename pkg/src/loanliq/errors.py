"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LoanLiqError(Exception):
    """Base class for all package errors."""


class ValidationError(LoanLiqError, ValueError):
    """An input violated a domain invariant.

    ``field`` names the offending attribute so config loaders can point at it.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class ConfigParseError(LoanLiqError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class InfeasibleError(LoanLiqError):
    """The model has no feasible point.

    ``gap`` is the amount by which the binding requirement is missed, when it
    can be measured (e.g. cash still owed after liquidating everything).
    """

    def __init__(self, reason: str, gap: float | None = None, stage: str | None = None):
        self.reason = reason
        self.gap = gap
        self.stage = stage
        prefix = f"[{stage}] " if stage else ""
        suffix = f" (gap {gap:.6g})" if gap is not None else ""
        super().__init__(f"{prefix}{reason}{suffix}")


class SolverError(LoanLiqError):
    """Numerical breakdown inside a solver. Never silently turned into an answer."""
