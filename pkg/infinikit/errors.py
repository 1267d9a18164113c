# infinikit/errors.py
"""Exception hierarchy. `reason` is the token the CLI prints before the message."""

from __future__ import annotations

from collections.abc import Iterable


class InfinikitError(Exception):
    reason = "error"


# --- Domain errors (CLI exit 1) ----------------------------------------------
class DomainError(InfinikitError):
    reason = "domain-error"


class ConfigError(DomainError):
    reason = "config"


class DivisionByZeroError(DomainError, ZeroDivisionError):
    reason = "division-by-zero"


class InfiniteInputError(DomainError):
    reason = "infinite-input"


class PreconditionError(DomainError):
    reason = "precondition"


class NoLimitError(DomainError):
    reason = "no-limit"


class DegenerateInputError(DomainError):
    reason = "degenerate-input"


class CertificationError(DomainError):
    reason = "certification-failure"


class DimensionMismatchError(DomainError):
    reason = "dimension-mismatch"


class NonOrthogonalError(DomainError):
    reason = "non-orthogonal-q"


class EigensolverError(DomainError):
    reason = "eigensolver-failure"


class NoTailError(DomainError):
    reason = "no-tail"


class InsufficientDataError(DomainError):
    reason = "insufficient-data"


class NotCompactError(DomainError):
    reason = "not-compact"


class BridgeStageError(DomainError):
    """A bridge stage failed; `stage` names it and `cause` is the original error."""

    reason = "bridge-stage"

    def __init__(self, stage: str, cause: Exception) -> None:
        self.stage = stage
        self.cause = cause
        cause_reason = getattr(cause, "reason", type(cause).__name__)
        super().__init__(f"stage '{stage}' failed ({cause_reason}): {cause}")


class LockTimeoutError(DomainError):
    reason = "lock-timeout"


# --- Usage errors (CLI exit 2) -----------------------------------------------
class UsageError(InfinikitError):
    reason = "usage"


class BadInputError(UsageError):
    reason = "bad-input"


class ModeMismatchError(UsageError):
    reason = "mode-mismatch"

    def __init__(self, symbol: str, mode: str) -> None:
        self.symbol = symbol
        self.mode = mode
        super().__init__(f"symbol '{symbol}' is not valid in {mode} mode")


class ExprSyntaxError(UsageError):
    reason = "syntax-error"

    def __init__(
        self, message: str, line: int, column: int, expected: Iterable[str] = ()
    ) -> None:
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"line {line}, column {column}: {message}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
