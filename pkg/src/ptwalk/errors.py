"""Exception types shared across the package."""

from __future__ import annotations


class GraphFormatError(ValueError):
    """Malformed graph input (bad edge, bad file contents)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(ArithmeticError):
    """A mathematical precondition of an operation does not hold."""


class NotDiagonalizableError(PreconditionError):
    pass


class NotPseudoHermitianError(PreconditionError):
    pass


class SingularMetricError(PreconditionError):
    pass


class ConvergenceError(PreconditionError):
    pass


class GenerationBudgetExceeded(PreconditionError):
    """Rejection sampling ran out of attempts."""

    def __init__(self, family: str, seed: int, attempts: int, index: int | None = None):
        self.family = family
        self.seed = seed
        self.attempts = attempts
        self.index = index
        where = f"seed {seed}" if index is None else f"seed {seed}, graph index {index}"
        super().__init__(
            f"{family}: no acceptable graph after {attempts} attempts ({where})"
        )
