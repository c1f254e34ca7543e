"""Formula AST for propositional LTL with future and past operators.

Nodes are immutable dataclasses; structural equality and hashing come for
free, so formulas can be shared, deduplicated, and used as dict keys.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

AP_NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9]*\Z")

# Names the concrete syntax cannot express as atoms: single-letter operator
# tokens and the boolean literal spellings.  The AST refuses them so that
# every constructible formula round-trips through the printer and parser.
RESERVED_NAMES = frozenset(
    {"X", "F", "G", "U", "Y", "O", "H", "S",
     "true", "True", "TRUE", "false", "False", "FALSE"}
)


class Formula:
    """Base class for all formula nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class AtomicProp(Formula):
    name: str

    def __post_init__(self):
        if not AP_NAME_RE.match(self.name):
            raise ValueError(
                f"invalid atomic proposition name {self.name!r}: must match "
                "[a-zA-Z][a-zA-Z0-9]*"
            )
        if self.name in RESERVED_NAMES:
            raise ValueError(
                f"atomic proposition name {self.name!r} collides with an "
                "operator token or boolean literal"
            )


@dataclass(frozen=True)
class LiteralTrue(Formula):
    pass


@dataclass(frozen=True)
class LiteralFalse(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Equiv(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    child: Formula


@dataclass(frozen=True)
class Globally(Formula):
    child: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Yesterday(Formula):
    child: Formula


@dataclass(frozen=True)
class Once(Formula):
    child: Formula


@dataclass(frozen=True)
class Historically(Formula):
    child: Formula


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    right: Formula


UNARY_TYPES = (Not, Next, Eventually, Globally, Yesterday, Once, Historically)
BINARY_TYPES = (And, Or, Implies, Equiv, Until, Since)
FUTURE_TEMPORAL_TYPES = (Next, Eventually, Globally, Until)
PAST_TEMPORAL_TYPES = (Yesterday, Once, Historically, Since)


@dataclass(frozen=True)
class APVocabulary:
    """Insertion-ordered set of distinct atomic-proposition names."""

    names: tuple[str, ...]

    def __post_init__(self):
        seen = set()
        for name in self.names:
            if not AP_NAME_RE.match(name) or name in RESERVED_NAMES:
                raise ValueError(f"invalid atomic proposition name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate atomic proposition name {name!r}")
            seen.add(name)

    @classmethod
    def of(cls, names) -> "APVocabulary":
        """Build a vocabulary from any iterable, deduplicating in order."""
        out: list[str] = []
        seen: set[str] = set()
        for name in names:
            if name not in seen:
                seen.add(name)
                out.append(name)
        return cls(tuple(out))

    def union(self, other: "APVocabulary") -> "APVocabulary":
        return APVocabulary.of((*self.names, *other.names))

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self.names


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, UNARY_TYPES):
        return (f.child,)
    if isinstance(f, BINARY_TYPES):
        return (f.left, f.right)
    return ()


def iter_subformulas(f: Formula) -> Iterator[Formula]:
    """Yield f and every descendant in left-to-right preorder."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def collect_aps(f: Formula) -> APVocabulary:
    """Distinct atom names in a left-to-right preorder walk."""
    return APVocabulary.of(
        node.name for node in iter_subformulas(f) if isinstance(node, AtomicProp)
    )


def is_future_only(f: Formula) -> bool:
    """True iff f contains no past temporal operator."""
    return not any(isinstance(n, PAST_TEMPORAL_TYPES) for n in iter_subformulas(f))


def is_past_only(f: Formula) -> bool:
    """True iff f contains no future temporal operator."""
    return not any(isinstance(n, FUTURE_TEMPORAL_TYPES) for n in iter_subformulas(f))


def formula_depth(f: Formula) -> int:
    """Nesting depth; atoms and literals have depth 0."""
    kids = children(f)
    if not kids:
        return 0
    return 1 + max(formula_depth(k) for k in kids)
