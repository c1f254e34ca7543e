"""Exception types shared across the toolkit."""

from __future__ import annotations

from enum import Enum


class LtlkitError(Exception):
    """Base class for all toolkit errors."""


class SyntaxErrorKind(Enum):
    UNBALANCED_PARENTHESES = "unbalanced parentheses"
    MISSING_OPERAND = "missing operand"
    INVALID_AP = "invalid atomic proposition token"
    UNEXPECTED_TOKEN = "unexpected token"
    TRAILING_INPUT = "trailing input after formula"
    EMPTY_INPUT = "empty input"


class FormulaSyntaxError(LtlkitError):
    """Rejection of a string by the concrete LTL grammar.

    Carries the byte offset of the offending token and a description of
    what the parser expected there.
    """

    def __init__(self, kind: SyntaxErrorKind, position: int, expected: str):
        self.kind = kind
        self.position = position
        self.expected = expected
        super().__init__(f"{kind.value} at offset {position}: expected {expected}")


class ConstructorSyntaxError(LtlkitError):
    """Malformed constructor expression: bad nesting, unknown constructor,
    or wrong arity."""


class ApLexError(LtlkitError):
    """A string argument that is not a legal atomic-proposition name."""


class TraceFormatError(LtlkitError):
    """A trace text or trace code literal that does not match the format."""


class BudgetExceededError(LtlkitError):
    """Bounded enumeration would exceed the configured budget."""


class UnsupportedFeatureError(LtlkitError):
    """Input outside the documented subset of the model-checker export."""


class SchemaError(LtlkitError):
    """A dataset record that does not match the documented schema."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = f" (line {line}" + (f", field {field!r})" if field else ")") if line else ""
        super().__init__(message + where)


class InvariantViolationError(LtlkitError):
    """A dataset item that parses but violates a kind-specific invariant."""

    def __init__(self, item_id: str, reason: str):
        self.item_id = item_id
        self.reason = reason
        super().__init__(f"item {item_id!r}: {reason}")


class MutationExhaustedError(LtlkitError):
    """No mutation of the given formula produces a malformed string."""


class MissingSlotError(LtlkitError):
    """A prompt template slot the item does not provide."""


class InvalidCombinationError(LtlkitError):
    """A (task, interface, strategy) combination outside the supported grid."""


class ConfigError(LtlkitError):
    """A run configuration that cannot be executed."""


class CacheMissError(LtlkitError):
    """Replay client asked for a prompt absent from the transcript cache."""
