"""Finite traces, states, and the three-valued evaluation outcome.

Trace text format (used in prompts, corpora, and the CLI)::

    trace  := "[" [ state ( ";" state )* ] "]"
    state  := "{" [ assign ( "," assign )* ] "}"
    assign := name "=" ( "0" | "1" )
    name   := [a-zA-Z][a-zA-Z0-9]*

Whitespace between tokens is insignificant.  `parse_trace` and
`format_trace` round-trip exactly.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping

from .errors import TraceFormatError
from .formulas import AP_NAME_RE, APVocabulary


class EvalOutcome(Enum):
    """Three-valued evaluation result."""

    DEFINED_TRUE = "DefinedTrue"
    DEFINED_FALSE = "DefinedFalse"
    UNDEFINED = "Undefined"

    @property
    def is_defined(self) -> bool:
        return self is not EvalOutcome.UNDEFINED


@dataclass(frozen=True)
class State:
    """One trace position: an ordered partial assignment of booleans to
    atomic-proposition names."""

    assignments: tuple[tuple[str, bool], ...]

    def __post_init__(self):
        seen = set()
        for name, value in self.assignments:
            if not AP_NAME_RE.match(name):
                raise TraceFormatError(f"invalid proposition name {name!r}")
            if not isinstance(value, bool):
                raise TraceFormatError(f"value for {name!r} must be a boolean")
            if name in seen:
                raise TraceFormatError(f"duplicate proposition {name!r} in state")
            seen.add(name)

    @classmethod
    def of(cls, mapping: Mapping[str, bool] | Iterable[tuple[str, bool]]) -> "State":
        if isinstance(mapping, Mapping):
            return cls(tuple(mapping.items()))
        return cls(tuple(mapping))

    def value_of(self, name: str) -> bool | None:
        """The assigned value, or None when the name is unassigned."""
        for key, value in self.assignments:
            if key == name:
                return value
        return None

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.assignments)


@dataclass(frozen=True)
class Trace:
    """A finite sequence of states; positions are 0-based."""

    states: tuple[State, ...]

    @classmethod
    def of(cls, states: Iterable[State | Mapping[str, bool]]) -> "Trace":
        return cls(tuple(
            s if isinstance(s, State) else State.of(s) for s in states
        ))

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[State]:
        return iter(self.states)

    def __getitem__(self, pos: int) -> State:
        return self.states[pos]

    def is_complete_for(self, vocab: APVocabulary | Iterable[str]) -> bool:
        """True iff every state assigns every name in vocab."""
        names = tuple(vocab)
        return all(
            state.value_of(name) is not None
            for state in self.states
            for name in names
        )


def format_trace(trace: Trace) -> str:
    states = []
    for state in trace:
        inner = ", ".join(
            f"{name}={1 if value else 0}" for name, value in state.assignments
        )
        states.append("{" + inner + "}")
    return "[" + "; ".join(states) + "]"


def format_trace_code_literal(trace: Trace) -> str:
    """Render a trace as the Python literal shape used by the
    code-completion interface: a list of states, each a list of
    (name, bool) tuples."""
    states = []
    for state in trace:
        pairs = ", ".join(
            f'("{name}", {value})' for name, value in state.assignments
        )
        states.append(f"[{pairs}]")
    return "[" + ", ".join(states) + "]"


_TRACE_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[a-zA-Z][a-zA-Z0-9]*)|(?P<punct>[\[\]{};,=])|(?P<bit>[01]))"
)


def parse_trace(text: str) -> Trace:
    """Parse the trace text format; inverse of format_trace."""
    tokens: list[tuple[str, str, int]] = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TRACE_TOKEN_RE.match(text, i)
        if not m or m.start() != i:
            raise TraceFormatError(f"unexpected character {text[i]!r} at offset {i}")
        kind = m.lastgroup or ""
        tokens.append((kind, m.group(kind), m.start(kind)))
        i = m.end()

    pos = 0

    def peek() -> tuple[str, str, int]:
        if pos >= len(tokens):
            return ("eof", "", len(text))
        return tokens[pos]

    def expect(kind: str, value: str | None = None) -> str:
        nonlocal pos
        k, v, off = peek()
        if k != kind or (value is not None and v != value):
            want = value if value is not None else kind
            raise TraceFormatError(f"expected {want!r} at offset {off}, found {v!r}")
        pos += 1
        return v

    expect("punct", "[")
    states: list[State] = []
    if peek()[:2] == ("punct", "{"):
        while True:
            expect("punct", "{")
            assignments: list[tuple[str, bool]] = []
            if peek()[0] == "name":
                while True:
                    name = expect("name")
                    expect("punct", "=")
                    k, v, off = peek()
                    if k == "bit":
                        pos += 1
                    else:
                        raise TraceFormatError(
                            f"expected '0' or '1' at offset {off}, found {v!r}"
                        )
                    assignments.append((name, v == "1"))
                    if peek()[:2] == ("punct", ","):
                        pos += 1
                        continue
                    break
            expect("punct", "}")
            states.append(State(tuple(assignments)))
            if peek()[:2] == ("punct", ";"):
                pos += 1
                continue
            break
    expect("punct", "]")
    if pos != len(tokens):
        _, v, off = peek()
        raise TraceFormatError(f"trailing input {v!r} at offset {off}")
    return Trace(tuple(states))


def parse_trace_code_literal(text: str) -> Trace:
    """Parse a trace written as a Python literal: a list of states, where
    a state is a list of (name, bool) pairs or a single bare pair."""
    try:
        value = ast.literal_eval(text.strip())
    except (SyntaxError, ValueError) as exc:
        raise TraceFormatError(f"not a valid trace literal: {exc}") from exc
    return trace_from_literal(value)


def trace_from_literal(value: object) -> Trace:
    """Normalize an already-evaluated literal into a Trace."""
    if not isinstance(value, (list, tuple)):
        raise TraceFormatError("trace literal must be a list of states")
    states = []
    for entry in value:
        states.append(_state_from_literal(entry))
    return Trace(tuple(states))


def _is_pair(value: object) -> bool:
    return (
        isinstance(value, tuple)
        and len(value) == 2
        and isinstance(value[0], str)
        and isinstance(value[1], (bool, int))
    )


def _state_from_literal(value: object) -> State:
    if _is_pair(value):
        value = [value]
    if not isinstance(value, (list, tuple)):
        raise TraceFormatError("state literal must be a list of (name, bool) pairs")
    assignments = []
    for pair in value:
        if not _is_pair(pair):
            raise TraceFormatError(f"not a (name, bool) pair: {pair!r}")
        name, raw = pair
        if isinstance(raw, bool):
            bit = raw
        elif raw in (0, 1):
            bit = bool(raw)
        else:
            raise TraceFormatError(f"value for {name!r} must be a boolean or 0/1")
        assignments.append((name, bit))
    return State(tuple(assignments))
