"""Exception types shared across the package."""

from __future__ import annotations


class SignPatError(Exception):
    """Base class for all errors raised by signpat."""


class PatternParseError(SignPatError, ValueError):
    """Malformed pattern text. ``row`` and ``col`` are 1-based when known."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        self.row = row
        self.col = col
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", column {col}" if col is not None else "") + ")"
        super().__init__(message + where)


class PreconditionError(SignPatError, ValueError):
    """An operation was called on an input outside its domain."""


class CapExceededError(SignPatError, RuntimeError):
    """An exhaustive enumeration would exceed the configured size cap."""


class NumericalFailure(SignPatError, ArithmeticError):
    """An eigenvalue computation did not converge or disagreed with itself."""


class CalibrationError(NumericalFailure):
    """No perturbation size satisfied the witness acceptance criteria."""

    def __init__(self, message: str, last_frequency=None, last_epsilon: float | None = None):
        self.last_frequency = last_frequency
        self.last_epsilon = last_epsilon
        super().__init__(message)


class InternalInconsistency(SignPatError):
    """Two routes that must agree did not; indicates a defect, not bad input."""
