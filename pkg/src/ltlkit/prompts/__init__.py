"""Prompt construction and model-reply parsing for every task cell.

Templates are plain-text files with ``{{slot}}`` placeholders, shipped
as package data under ``templates/`` and addressed by id
``<task>_<interface>``.  Few-shot runs prepend exactly three worked
examples; self-refinement produces a two-turn script whose second turn
embeds the model's first reply with a fixed revision instruction and no
external feedback.

Reply parsers are total: any output, however malformed, lands in a typed
failure value rather than an exception.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Mapping

from ..constructor import parse_constructor_form, strip_code_fences
from ..errors import (
    ApLexError,
    ConstructorSyntaxError,
    FormulaSyntaxError,
    InvalidCombinationError,
    MissingSlotError,
    TraceFormatError,
)
from ..formulas import Formula
from ..parser import parse_ltl
from ..traces import Trace, parse_trace, trace_from_literal


class Task(Enum):
    NL2PL = "nl2pl"
    WFF = "wff"
    NL2LTL = "nl2ltl"
    TRACECHAR = "tracechar"
    TRACEGEN = "tracegen"
    NL2PLTL = "nl2pltl"


class Interface(Enum):
    MINIMAL = "minimal"
    DETAILED = "detailed"
    CODE_COMPLETION = "codecompletion"


class Strategy(Enum):
    ZERO_SHOT = "zeroshot"
    FEW_SHOT = "fewshot"
    SELF_REFINE = "selfrefine"


# tasks for which the code-completion interface exists
CODE_COMPLETION_TASKS = frozenset(
    {Task.NL2LTL, Task.NL2PLTL, Task.TRACECHAR, Task.TRACEGEN}
)

FEW_SHOT_EXEMPLAR_COUNT = 3


@dataclass(frozen=True)
class Exemplar:
    """One worked example: the rendered task inputs and the expected
    answer in the interface's own output syntax."""

    input_block: str
    answer: str


@dataclass(frozen=True)
class PromptSpec:
    task: Task
    interface: Interface
    strategy: Strategy
    exemplars: tuple[Exemplar, ...] = ()

    def __post_init__(self):
        if (
            self.interface is Interface.CODE_COMPLETION
            and self.task not in CODE_COMPLETION_TASKS
        ):
            raise InvalidCombinationError(
                f"the code-completion interface does not exist for task "
                f"{self.task.value}"
            )
        if self.strategy is Strategy.FEW_SHOT:
            if len(self.exemplars) != FEW_SHOT_EXEMPLAR_COUNT:
                raise InvalidCombinationError(
                    f"few-shot prompting takes exactly "
                    f"{FEW_SHOT_EXEMPLAR_COUNT} exemplars, "
                    f"got {len(self.exemplars)}"
                )
        elif self.exemplars:
            raise InvalidCombinationError(
                f"{self.strategy.value} prompting takes no exemplars"
            )


@dataclass(frozen=True)
class RenderedPrompt:
    text: str
    template_id: str
    slot_values: tuple[tuple[str, str], ...]
    item_id: str | None = None


@dataclass(frozen=True)
class TwoTurnScript:
    """Self-refinement: send first, then the revision turn rendered with
    the model's first reply."""

    first: RenderedPrompt
    revision_template_id: str = "strategy_selfrefine_revision"

    def revision_text(self, prior_reply: str) -> str:
        return _fill(
            load_template(self.revision_template_id),
            {"prior_reply": prior_reply},
            self.revision_template_id,
        )


@lru_cache(maxsize=None)
def load_template(template_id: str) -> str:
    path = resources.files(__package__) / "templates" / f"{template_id}.txt"
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InvalidCombinationError(f"no template {template_id!r}") from None


_SLOT_RE = re.compile(r"\{\{([a-z_]+)\}\}")


def _fill(template: str, slots: Mapping[str, str], template_id: str) -> str:
    def repl(m: re.Match) -> str:
        name = m.group(1)
        if name not in slots:
            raise MissingSlotError(
                f"template {template_id!r} needs slot {name!r}"
            )
        return slots[name]

    return _SLOT_RE.sub(repl, template)


def template_slots(template_id: str) -> tuple[str, ...]:
    """The distinct slot names a template uses, in order of appearance."""
    seen: list[str] = []
    for m in _SLOT_RE.finditer(load_template(template_id)):
        if m.group(1) not in seen:
            seen.append(m.group(1))
    return tuple(seen)


def render_ap_mapping(ap_map) -> str:
    """The `(variable_name -> "English sentence fragment")` rendering of
    an AP mapping, comma-separated."""
    return ", ".join(f'({var} -> "{phrase}")' for var, phrase in ap_map)


def build_prompt(
    spec: PromptSpec, slots: Mapping[str, str], item_id: str | None = None
) -> RenderedPrompt | TwoTurnScript:
    """Render the prompt for one dataset item.

    `slots` carries the task's slot values (the harness derives them
    from the item; see `ltlkit.harness.runner.item_slots`).  Raises
    MissingSlotError when a needed slot is absent and
    InvalidCombinationError for unsupported (task, interface, strategy)
    cells.
    """
    template_id = f"{spec.task.value}_{spec.interface.value}"
    body = _fill(load_template(template_id), slots, template_id)

    if spec.strategy is Strategy.FEW_SHOT:
        example_template = load_template("strategy_fewshot_example")
        blocks = []
        for k, ex in enumerate(spec.exemplars, start=1):
            blocks.append(_fill(
                example_template,
                {
                    "index": str(k),
                    "input_block": ex.input_block,
                    "answer": ex.answer,
                },
                "strategy_fewshot_example",
            ))
        text = "\n".join(blocks) + "\n" + body
    else:
        text = body

    rendered = RenderedPrompt(
        text=text,
        template_id=template_id,
        slot_values=tuple(sorted(slots.items())),
        item_id=item_id,
    )
    if spec.strategy is Strategy.SELF_REFINE:
        return TwoTurnScript(first=rendered)
    return rendered


# ---------------------------------------------------------------------------
# reply parsing

@dataclass(frozen=True)
class ParseFailure:
    """A reply from which no artifact could be extracted."""

    reason: str


class Decision(Enum):
    YES = "yes"
    NO = "no"
    UNPARSEABLE = "unparseable"


@dataclass(frozen=True)
class CandidateTraces:
    """Traces extracted from a trace-generation reply.  Deliberately
    unvalidated: whether they satisfy or violate anything is the
    oracle's job downstream."""

    satisfying: Trace | None
    violating: Trace | None
    missing: tuple[str, ...] = ()


_LABEL_PREFIX_RE = re.compile(
    r"^\s*(?:ltl\s+formula|formula|ltl|answer|output)\s*[:=]\s*",
    re.IGNORECASE,
)


def _candidate_lines(text: str) -> list[str]:
    return [line.strip() for line in strip_code_fences(text).splitlines() if line.strip()]


def parse_formula_reply(text: str, interface: Interface) -> Formula | ParseFailure:
    """Extract a formula from a model reply; never raises.

    Text interfaces: take the last non-empty line (after stripping code
    fences and a leading label) and parse the concrete syntax.  Code
    interface: take the last `formulaToFind =` assignment, falling back
    to the last non-empty line, and parse the constructor syntax.
    """
    lines = _candidate_lines(text)
    if not lines:
        return ParseFailure("empty reply")

    if interface is Interface.CODE_COMPLETION:
        assignments = [ln for ln in lines if "formulaToFind" in ln]
        candidate = assignments[-1] if assignments else lines[-1]
        try:
            return parse_constructor_form(candidate)
        except (ConstructorSyntaxError, ApLexError) as exc:
            return ParseFailure(str(exc))

    candidate = _LABEL_PREFIX_RE.sub("", lines[-1])
    try:
        return parse_ltl(candidate)
    except FormulaSyntaxError as exc:
        return ParseFailure(str(exc))


_YES_TOKENS = frozenset({"yes", "well-formed", "wellformed", "valid", "satisfies", "true"})
_NO_TOKENS = frozenset({"no", "ill-formed", "illformed", "malformed", "invalid", "false"})

_WORD_RE = re.compile(r"[a-zA-Z-]+")


def parse_decision_reply(text: str) -> Decision:
    """Map a reply onto Yes/No via a leading or isolated token; anything
    else is Unparseable (scored as incorrect, tallied separately)."""
    lines = _candidate_lines(text)
    if not lines:
        return Decision.UNPARSEABLE

    def classify(token: str) -> Decision | None:
        token = token.lower().strip(".,!:;")
        if token in _YES_TOKENS:
            return Decision.YES
        if token in _NO_TOKENS:
            return Decision.NO
        return None

    first_words = _WORD_RE.findall(lines[0])
    if first_words:
        got = classify(first_words[0])
        if got is not None:
            return got
    # an isolated token on its own line anywhere in the reply
    for line in lines:
        words = _WORD_RE.findall(line)
        if len(words) == 1:
            got = classify(words[0])
            if got is not None:
                return got
    return Decision.UNPARSEABLE


_TRACE_TEXT_RE = re.compile(r"\[[^\[\]]*\]")
_SAT_LABEL_RE = re.compile(r"satisfying|positive", re.IGNORECASE)
_VIOL_LABEL_RE = re.compile(r"violating|negative", re.IGNORECASE)


def _labeled_trace(text: str, label_re: re.Pattern) -> Trace | None:
    m = label_re.search(text)
    if not m:
        return None
    bracket = _TRACE_TEXT_RE.search(text, m.end())
    if not bracket:
        return None
    try:
        return parse_trace(bracket.group(0))
    except TraceFormatError:
        return None


def parse_trace_reply(text: str, interface: Interface) -> CandidateTraces | ParseFailure:
    """Extract the (satisfying, violating) trace candidates; never raises.

    Text interfaces read two labeled traces in the trace text format.
    The code interface reads Python literals: either two labeled
    assignments or one two-element list literal.  Missing sections are
    flagged, not fatal; a reply with no extractable trace at all is a
    ParseFailure.
    """
    body = strip_code_fences(text)
    if interface is Interface.CODE_COMPLETION:
        sat, viol = _parse_code_trace_reply(body)
    else:
        sat = _labeled_trace(body, _SAT_LABEL_RE)
        viol = _labeled_trace(body, _VIOL_LABEL_RE)
        if sat is None and viol is None:
            # fall back to the first two bare traces, in order
            found = []
            for m in _TRACE_TEXT_RE.finditer(body):
                try:
                    found.append(parse_trace(m.group(0)))
                except TraceFormatError:
                    continue
                if len(found) == 2:
                    break
            if len(found) == 2:
                sat, viol = found
            elif len(found) == 1:
                sat = found[0]

    if sat is None and viol is None:
        return ParseFailure("no trace found in reply")
    missing = tuple(
        name for name, value in (("satisfying", sat), ("violating", viol))
        if value is None
    )
    return CandidateTraces(satisfying=sat, violating=viol, missing=missing)


_CODE_ASSIGN_RE = re.compile(
    r"(satisfying\w*|violating\w*|positive\w*|negative\w*)\s*=\s*(.+)",
    re.IGNORECASE,
)


def _parse_code_trace_reply(body: str) -> tuple[Trace | None, Trace | None]:
    sat: Trace | None = None
    viol: Trace | None = None
    for line in body.splitlines():
        m = _CODE_ASSIGN_RE.match(line.strip())
        if not m:
            continue
        label = m.group(1).lower()
        try:
            trace = trace_from_literal(ast.literal_eval(m.group(2).strip()))
        except (SyntaxError, ValueError, TraceFormatError):
            continue
        if label.startswith(("satisfying", "positive")) and sat is None:
            sat = trace
        elif label.startswith(("violating", "negative")) and viol is None:
            viol = trace
    if sat is not None or viol is not None:
        return sat, viol

    # a single literal holding the pair [satisfying, violating]
    for line in body.splitlines():
        line = line.strip()
        if not line.startswith("["):
            continue
        try:
            value = ast.literal_eval(line)
        except (SyntaxError, ValueError):
            continue
        if isinstance(value, (list, tuple)) and len(value) == 2:
            try:
                return trace_from_literal(value[0]), trace_from_literal(value[1])
            except TraceFormatError:
                continue
    return None, None
