"""Exception types shared across the package."""


class DalgError(Exception):
    """Base class for all package errors."""


class ParseError(DalgError):
    """Raised on malformed input text; carries the offset of the failure."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class FieldError(DalgError):
    """Coefficient-field misuse: unknown parameter, i outside Q(i), etc."""


class BudgetExceededError(DalgError):
    """A matrix would exceed the configured entry budget."""

    def __init__(self, rows, cols, budget):
        self.rows = rows
        self.cols = cols
        self.budget = budget
        super().__init__(
            f"matrix of {rows} x {cols} = {rows * cols} entries exceeds budget {budget}"
        )


class HypothesisError(DalgError):
    """An operation's mathematical hypothesis is violated (zero resultant,
    non-separable input, vanishing denominator, ...)."""


class WindowError(DalgError):
    """A Hilbert-function window is too short for the requested fit."""
