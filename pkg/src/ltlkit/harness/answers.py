"""Reference answers per (task, interface) and the mock personas.

`reference_answer` renders the ground truth in the interface's own
output syntax; it backs both the compliant mock and few-shot exemplar
construction.  The other personas degrade it in controlled ways:

    compliant       the ground truth, correctly formatted
    operator_swap   every always-operator replaced by eventually (and
                    inverted/corrupted outputs for non-formula tasks)
    malformed       output that never parses
    noncompliant    hedging prose with no extractable artifact
"""

from __future__ import annotations

from enum import Enum

from ..constructor import render_constructor_form
from ..datasets import ApExtractionItem, Nl2LtlItem, TraceItem, WffItem
from ..formulas import (
    AtomicProp,
    Eventually,
    Formula,
    Globally,
    LiteralFalse,
    LiteralTrue,
    Not,
    UNARY_TYPES,
)
from ..oracle import OracleConfig, find_traces
from ..parser import check_wff
from ..printer import print_ltl_bare
from ..prompts import Interface, Task
from ..semantics import satisfies
from ..traces import (
    EvalOutcome,
    Trace,
    format_trace,
    format_trace_code_literal,
)


class Persona(Enum):
    COMPLIANT = "compliant"
    OPERATOR_SWAP = "operator_swap"
    MALFORMED = "malformed"
    NONCOMPLIANT = "noncompliant"


def swap_globally_with_eventually(f: Formula) -> Formula:
    """Structurally replace every always-node with an eventually-node."""
    if isinstance(f, Globally):
        return Eventually(swap_globally_with_eventually(f.child))
    if isinstance(f, UNARY_TYPES):
        return type(f)(swap_globally_with_eventually(f.child))
    if hasattr(f, "left"):
        return type(f)(
            swap_globally_with_eventually(f.left),
            swap_globally_with_eventually(f.right),
        )
    return f


def task_formula(item) -> Formula:
    if isinstance(item, Nl2LtlItem):
        return item.gt_formula
    if isinstance(item, TraceItem):
        return item.formula
    raise TypeError(f"item {item!r} carries no formula")


def _render_formula(f: Formula, interface: Interface) -> str:
    if interface is Interface.CODE_COMPLETION:
        return f"formulaToFind = {render_constructor_form(f)}"
    return print_ltl_bare(f)


def _render_traces(sat: Trace | None, viol: Trace | None, interface: Interface) -> str:
    lines = []
    if interface is Interface.CODE_COMPLETION:
        if sat is not None:
            lines.append(f"satisfyingTrace = {format_trace_code_literal(sat)}")
        if viol is not None:
            lines.append(f"violatingTrace = {format_trace_code_literal(viol)}")
    else:
        if sat is not None:
            lines.append(f"satisfying: {format_trace(sat)}")
        if viol is not None:
            lines.append(f"violating: {format_trace(viol)}")
    return "\n".join(lines)


def _decision(value: bool) -> str:
    return "Yes" if value else "No"


def reference_answer(
    task: Task, interface: Interface, item, cfg: OracleConfig | None = None
) -> str:
    """The correct answer for one item, in this interface's output syntax."""
    cfg = cfg or OracleConfig()
    if task in (Task.NL2LTL, Task.NL2PLTL):
        return _render_formula(task_formula(item), interface)
    if task is Task.WFF:
        assert isinstance(item, WffItem)
        return _decision(check_wff(item.formula_text).well_formed)
    if task is Task.TRACECHAR:
        assert isinstance(item, TraceItem)
        outcome = satisfies(item.formula, item.trace)
        return _decision(outcome is EvalOutcome.DEFINED_TRUE)
    if task is Task.TRACEGEN:
        pair = find_traces(task_formula(item), cfg)
        return _render_traces(pair.satisfying, pair.violating, interface)
    if task is Task.NL2PL:
        phrases = (
            item.gold_phrases
            if isinstance(item, ApExtractionItem)
            else tuple(phrase for _, phrase in item.ap_map)
        )
        return "\n".join(phrases)
    raise ValueError(f"unknown task {task!r}")


def persona_answer(
    persona: Persona, task: Task, interface: Interface, item,
    cfg: OracleConfig | None = None,
) -> str:
    cfg = cfg or OracleConfig()

    if persona is Persona.COMPLIANT:
        return reference_answer(task, interface, item, cfg)

    if persona is Persona.MALFORMED:
        if interface is Interface.CODE_COMPLETION:
            return "formulaToFind = LAnd(AtomicProposition("
        return "((p U"

    if persona is Persona.NONCOMPLIANT:
        if task in (Task.WFF, Task.TRACECHAR):
            return "It depends."
        return "The formula is probably G p, or maybe F p"

    # operator swap
    if task in (Task.NL2LTL, Task.NL2PLTL):
        return _render_formula(
            swap_globally_with_eventually(task_formula(item)), interface
        )
    if task is Task.WFF:
        return _decision(not check_wff(item.formula_text).well_formed)
    if task is Task.TRACECHAR:
        outcome = satisfies(item.formula, item.trace)
        return _decision(outcome is not EvalOutcome.DEFINED_TRUE)
    if task is Task.TRACEGEN:
        pair = find_traces(task_formula(item), cfg)
        # labels swapped: the "satisfying" trace violates and vice versa
        return _render_traces(pair.violating, pair.satisfying, interface)
    if task is Task.NL2PL:
        phrases = (
            item.gold_phrases
            if isinstance(item, ApExtractionItem)
            else tuple(phrase for _, phrase in item.ap_map)
        )
        degraded = phrases[1:] if len(phrases) > 1 else ("something entirely else",)
        return "\n".join(degraded)
    raise ValueError(f"unknown task {task!r}")


def build_mock_answers(
    persona: Persona, task: Task, interface: Interface, items,
    cfg: OracleConfig | None = None,
) -> dict[str, str]:
    return {
        item.id: persona_answer(persona, task, interface, item, cfg)
        for item in items
    }
