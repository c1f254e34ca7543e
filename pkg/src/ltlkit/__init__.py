"""ltlkit: LTL parsing, finite-trace semantics, a bounded semantic
oracle, benchmark corpus generators, prompt interfaces, and an LLM
evaluation harness."""

__version__ = "0.1.0"

from .constructor import parse_constructor_form, render_constructor_form
from .formulas import (
    And,
    APVocabulary,
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
    collect_aps,
    is_future_only,
    is_past_only,
)
from .parser import WffVerdict, check_wff, parse_ltl
from .printer import print_ltl, print_ltl_bare
from .semantics import eval_at, eval_reference, satisfies
from .traces import EvalOutcome, State, Trace, format_trace, parse_trace

__all__ = [
    "__version__",
    "And", "APVocabulary", "AtomicProp", "Equiv", "Eventually", "Formula",
    "Globally", "Historically", "Implies", "LiteralFalse", "LiteralTrue",
    "Next", "Not", "Once", "Or", "Since", "Until", "Yesterday",
    "collect_aps", "is_future_only", "is_past_only",
    "WffVerdict", "check_wff", "parse_ltl",
    "print_ltl", "print_ltl_bare",
    "parse_constructor_form", "render_constructor_form",
    "eval_at", "eval_reference", "satisfies",
    "EvalOutcome", "State", "Trace", "format_trace", "parse_trace",
]
