"""Canonical single-line printer for the concrete LTL syntax.

Output is fully parenthesized so it never depends on operator precedence,
and ``parse_ltl(print_ltl(f))`` is structurally identical to ``f``.
"""

from __future__ import annotations

from .formulas import (
    And,
    AtomicProp,
    Equiv,
    Eventually,
    Formula,
    Globally,
    Historically,
    Implies,
    LiteralFalse,
    LiteralTrue,
    Next,
    Not,
    Once,
    Or,
    Since,
    Until,
    Yesterday,
)

_BINARY_SYMBOLS = {
    And: "&",
    Or: "|",
    Implies: "->",
    Equiv: "<->",
    Until: "U",
    Since: "S",
}

_UNARY_TEMPORAL_SYMBOLS = {
    Next: "X",
    Eventually: "F",
    Globally: "G",
    Yesterday: "Y",
    Once: "O",
    Historically: "H",
}


def print_ltl(f: Formula) -> str:
    if isinstance(f, AtomicProp):
        return f.name
    if isinstance(f, LiteralTrue):
        return "true"
    if isinstance(f, LiteralFalse):
        return "false"
    if isinstance(f, Not):
        return f"(!{print_ltl(f.child)})"
    sym = _UNARY_TEMPORAL_SYMBOLS.get(type(f))
    if sym is not None:
        return f"({sym} {print_ltl(f.child)})"
    sym = _BINARY_SYMBOLS.get(type(f))
    if sym is not None:
        return f"({print_ltl(f.left)} {sym} {print_ltl(f.right)})"
    raise TypeError(f"not a formula node: {f!r}")


def print_ltl_bare(f: Formula) -> str:
    """Like print_ltl but without the redundant outermost parentheses."""
    text = print_ltl(f)
    if text.startswith("(") and text.endswith(")"):
        return text[1:-1]
    return text
