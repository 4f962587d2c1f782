"""Exception hierarchy shared by the parsers, the solver and the generators."""

from typing import Optional


class EqQcspError(Exception):
    """Root of every error raised by this package."""


class FormatError(EqQcspError, ValueError):
    """Malformed input text; carries the 1-based position of the problem."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{location}: {message}"
        super().__init__(message)


class FormulaError(EqQcspError, ValueError):
    """Structurally invalid formula (prefix coverage, variable range, kernel length)."""


class ShapeError(EqQcspError, ValueError):
    """Formula or instance does not have the shape an operation requires."""


class NotHornError(ShapeError):
    """A clause with two or more positive literals reached Horn saturation."""


class CapExceededError(EqQcspError, ValueError):
    """A configured desk-scale cap would be exceeded."""


class BudgetExhaustedError(EqQcspError, RuntimeError):
    """The search node budget ran out before a verdict was reached."""

    def __init__(self, message: str, stats: Optional[dict] = None):
        self.stats = stats or {}
        super().__init__(message)


class StrategyError(EqQcspError, RuntimeError):
    """A winning strategy was requested for a false sentence."""
