"""Dataset schemas, loaders, and benchmark corpus generators.

The canonical on-disk format is a JSONL record stream, one object per
item.  Field schemas per kind:

    nl2ltl         {"id", "nl", "ap_map": [[var, phrase], ...],
                    "gt_formula", "tense": "future"|"past",
                    "domain_tag"?}
    wff            {"id", "formula_text", "label": "well_formed"|"malformed",
                    "ast_depth"?}
    trace          {"id", "formula", "trace", "label":
                    "satisfying"|"violating"}
    ap_extraction  {"id", "nl", "gold_phrases": [str, ...], "gt_formula"?}

Formulas are stored in the concrete LTL syntax and traces in the trace
text format.  Loading validates every item invariant; invalid items
either abort the load (default) or are collected into the load report
(``allow_partial=True``).  A tabular CSV export exists for spreadsheets.
"""

from __future__ import annotations

import csv
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    BudgetExceededError,
    FormulaSyntaxError,
    InvariantViolationError,
    MutationExhaustedError,
    SchemaError,
    TraceFormatError,
)
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
)
from .oracle import OracleConfig, find_traces
from .parser import check_wff, parse_ltl
from .printer import print_ltl
from .semantics import satisfies
from .traces import EvalOutcome, Trace, format_trace, parse_trace

log = logging.getLogger(__name__)

KIND_NL2LTL = "nl2ltl"
KIND_WFF = "wff"
KIND_TRACE = "trace"
KIND_AP_EXTRACTION = "ap_extraction"

DATASET_KINDS = (KIND_NL2LTL, KIND_WFF, KIND_TRACE, KIND_AP_EXTRACTION)


@dataclass(frozen=True)
class Nl2LtlItem:
    id: str
    nl: str
    ap_map: tuple[tuple[str, str], ...]
    gt_formula: Formula
    tense: str = "future"
    domain_tag: str | None = None

    def __post_init__(self):
        if self.tense not in ("future", "past"):
            raise InvariantViolationError(self.id, f"unknown tense {self.tense!r}")
        mapped = {var for var, _ in self.ap_map}
        if len(mapped) != len(self.ap_map):
            raise InvariantViolationError(self.id, "duplicate variable in ap_map")
        unmapped = [name for name in collect_aps(self.gt_formula) if name not in mapped]
        if unmapped:
            raise InvariantViolationError(
                self.id, f"formula uses unmapped propositions {unmapped}"
            )
        # future items stay in the future-only fragment; past items may
        # use the whole alphabet
        if self.tense == "future" and not is_future_only(self.gt_formula):
            raise InvariantViolationError(
                self.id, "future-tense formula uses past operators"
            )

    @property
    def vocabulary(self) -> APVocabulary:
        return APVocabulary.of(var for var, _ in self.ap_map)


@dataclass(frozen=True)
class WffItem:
    id: str
    formula_text: str  # raw, possibly malformed by design
    label: str
    ast_depth: int | None = None

    def __post_init__(self):
        if self.label not in ("well_formed", "malformed"):
            raise InvariantViolationError(self.id, f"unknown label {self.label!r}")
        verdict = check_wff(self.formula_text)
        if verdict.well_formed != (self.label == "well_formed"):
            raise InvariantViolationError(
                self.id,
                f"label {self.label!r} disagrees with the grammar "
                f"({'accepts' if verdict.well_formed else 'rejects'} the string)",
            )


@dataclass(frozen=True)
class TraceItem:
    id: str
    formula: Formula
    trace: Trace
    label: str

    def __post_init__(self):
        if self.label not in ("satisfying", "violating"):
            raise InvariantViolationError(self.id, f"unknown label {self.label!r}")
        outcome = satisfies(self.formula, self.trace)
        expected = (
            EvalOutcome.DEFINED_TRUE
            if self.label == "satisfying"
            else EvalOutcome.DEFINED_FALSE
        )
        if outcome is not expected:
            raise InvariantViolationError(
                self.id,
                f"label {self.label!r} disagrees with evaluation ({outcome.value})",
            )


@dataclass(frozen=True)
class ApExtractionItem:
    id: str
    nl: str
    gold_phrases: tuple[str, ...]
    gt_formula: Formula | None = None

    def __post_init__(self):
        if not self.gold_phrases:
            raise InvariantViolationError(self.id, "gold_phrases is empty")


@dataclass
class LoadReport:
    items: list
    rejected: list[tuple[int, str, str]]  # (line number, item id, reason)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


def _require(record: Mapping, field: str, line: int):
    if field not in record:
        raise SchemaError(f"missing field {field!r}", line=line, field=field)
    return record[field]


def _item_from_record(record: Mapping, kind: str, line: int):
    item_id = str(_require(record, "id", line))
    try:
        if kind == KIND_NL2LTL:
            ap_map = tuple(
                (str(var), str(phrase))
                for var, phrase in _require(record, "ap_map", line)
            )
            return Nl2LtlItem(
                id=item_id,
                nl=str(_require(record, "nl", line)),
                ap_map=ap_map,
                gt_formula=parse_ltl(str(_require(record, "gt_formula", line))),
                tense=str(record.get("tense", "future")),
                domain_tag=record.get("domain_tag"),
            )
        if kind == KIND_WFF:
            depth = record.get("ast_depth")
            return WffItem(
                id=item_id,
                formula_text=str(_require(record, "formula_text", line)),
                label=str(_require(record, "label", line)),
                ast_depth=int(depth) if depth is not None else None,
            )
        if kind == KIND_TRACE:
            return TraceItem(
                id=item_id,
                formula=parse_ltl(str(_require(record, "formula", line))),
                trace=parse_trace(str(_require(record, "trace", line))),
                label=str(_require(record, "label", line)),
            )
        if kind == KIND_AP_EXTRACTION:
            gt = record.get("gt_formula")
            return ApExtractionItem(
                id=item_id,
                nl=str(_require(record, "nl", line)),
                gold_phrases=tuple(str(p) for p in _require(record, "gold_phrases", line)),
                gt_formula=parse_ltl(str(gt)) if gt else None,
            )
    except (FormulaSyntaxError, TraceFormatError, ValueError) as exc:
        raise InvariantViolationError(item_id, str(exc)) from exc
    raise SchemaError(f"unknown dataset kind {kind!r}", line=line)


def load_dataset(path: str | Path, kind: str, allow_partial: bool = False) -> LoadReport:
    """Load and validate a JSONL dataset.

    With ``allow_partial`` invalid items are skipped and listed in the
    report; otherwise the first invalid item raises.
    """
    if kind not in DATASET_KINDS:
        raise SchemaError(f"unknown dataset kind {kind!r}")
    path = Path(path)
    report = LoadReport(items=[], rejected=[])
    with path.open(encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                record = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc}", line=line_no)
            if not isinstance(record, dict):
                raise SchemaError("record is not an object", line=line_no)
            try:
                report.items.append(_item_from_record(record, kind, line_no))
            except (SchemaError, InvariantViolationError) as exc:
                if not allow_partial:
                    raise
                item_id = str(record.get("id", f"line-{line_no}"))
                report.rejected.append((line_no, item_id, str(exc)))
    if not report.items and not report.rejected:
        log.warning("dataset %s is empty", path)
    return report


def item_to_record(item) -> dict:
    if isinstance(item, Nl2LtlItem):
        record = {
            "id": item.id,
            "nl": item.nl,
            "ap_map": [list(pair) for pair in item.ap_map],
            "gt_formula": print_ltl(item.gt_formula),
            "tense": item.tense,
        }
        if item.domain_tag is not None:
            record["domain_tag"] = item.domain_tag
        return record
    if isinstance(item, WffItem):
        record = {"id": item.id, "formula_text": item.formula_text, "label": item.label}
        if item.ast_depth is not None:
            record["ast_depth"] = item.ast_depth
        return record
    if isinstance(item, TraceItem):
        return {
            "id": item.id,
            "formula": print_ltl(item.formula),
            "trace": format_trace(item.trace),
            "label": item.label,
        }
    if isinstance(item, ApExtractionItem):
        record = {"id": item.id, "nl": item.nl, "gold_phrases": list(item.gold_phrases)}
        if item.gt_formula is not None:
            record["gt_formula"] = print_ltl(item.gt_formula)
        return record
    raise TypeError(f"not a dataset item: {item!r}")


def save_dataset(items: Iterable, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for item in items:
            fh.write(json.dumps(item_to_record(item), sort_keys=True) + "\n")


def export_csv(items: Sequence, path: str | Path) -> None:
    """Delimiter-separated export of the same records, for spreadsheets."""
    records = [item_to_record(item) for item in items]
    fields: list[str] = []
    for record in records:
        for key in record:
            if key not in fields:
                fields.append(key)
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for record in records:
            writer.writerow({
                key: json.dumps(value) if isinstance(value, list) else value
                for key, value in record.items()
            })


# ---------------------------------------------------------------------------
# grammar-based sampling

_UNARY_CHOICES: tuple[tuple[str, type], ...] = (
    ("!", Not), ("X", Next), ("F", Eventually), ("G", Globally),
    ("Y", Yesterday), ("O", Once), ("H", Historically),
)
_BINARY_CHOICES: tuple[tuple[str, type], ...] = (
    ("&", And), ("|", Or), ("->", Implies), ("<->", Equiv),
    ("U", Until), ("S", Since),
)

DEFAULT_LITERAL_WEIGHT = 0.1


def sample_formula(
    vocab: Sequence[str] | APVocabulary,
    depth_range: tuple[int, int] | range = (0, 8),
    operator_weights: Mapping[str, float] | None = None,
    seed: int | random.Random = 0,
    future_only: bool = False,
) -> Formula:
    """Sample one well-formed formula with depth uniform in depth_range.

    Production choice at each node is weighted by ``operator_weights``
    (symbol keys; missing symbols weigh 1.0, and "true"/"false" control
    the literal share of leaves).  Deterministic under the seed.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    names = tuple(vocab)
    if isinstance(depth_range, range):
        lo, hi = depth_range.start, depth_range.stop - 1
    else:
        lo, hi = depth_range
    if lo < 0 or hi < lo:
        raise ValueError("depth_range must be a non-empty non-negative range")
    weights = dict(operator_weights or {})

    unary = _UNARY_CHOICES
    binary = _BINARY_CHOICES
    if future_only:
        unary = tuple(c for c in unary if c[0] not in ("Y", "O", "H"))
        binary = tuple(c for c in binary if c[0] != "S")

    def leaf() -> Formula:
        literal_weight = weights.get("true", DEFAULT_LITERAL_WEIGHT / 2) + weights.get(
            "false", DEFAULT_LITERAL_WEIGHT / 2
        )
        if not names or rng.random() < literal_weight:
            return LiteralTrue() if rng.random() < 0.5 else LiteralFalse()
        return AtomicProp(rng.choice(names))

    def build(depth: int) -> Formula:
        if depth == 0:
            return leaf()
        choices = [(sym, ctor, 1) for sym, ctor in unary] + [
            (sym, ctor, 2) for sym, ctor in binary
        ]
        total = sum(weights.get(sym, 1.0) for sym, _, _ in choices)
        pick = rng.random() * total
        acc = 0.0
        sym, ctor, arity = choices[-1]
        for s, c, a in choices:
            acc += weights.get(s, 1.0)
            if pick < acc:
                sym, ctor, arity = s, c, a
                break
        if arity == 1:
            return ctor(build(depth - 1))
        # one child carries the depth; the other is free below it
        deep = build(depth - 1)
        shallow = build(rng.randint(0, depth - 1))
        if rng.random() < 0.5:
            return ctor(deep, shallow)
        return ctor(shallow, deep)

    return build(rng.randint(lo, hi))


_MUTATIONS = (
    "delete_left_operand",
    "delete_right_operand",
    "drop_parenthesis",
    "duplicate_binary_operator",
    "truncate_suffix",
)

_BINARY_SYMBOLS = {
    And: "&", Or: "|", Implies: "->", Equiv: "<->", Until: "U", Since: "S",
}


def _print_with_mutation(f: Formula, target: Formula, mode: str) -> str:
    """Print f, rendering the target binary node with one operand deleted
    or its operator duplicated."""
    from .formulas import UNARY_TYPES
    from .printer import _UNARY_TEMPORAL_SYMBOLS  # shared symbol tables

    def render(node: Formula) -> str:
        if node is target:
            sym = _BINARY_SYMBOLS[type(node)]
            if mode == "delete_left_operand":
                return f"({sym} {render(node.right)})"
            if mode == "delete_right_operand":
                return f"({render(node.left)} {sym})"
            return f"({render(node.left)} {sym} {sym} {render(node.right)})"
        if isinstance(node, AtomicProp):
            return node.name
        if isinstance(node, LiteralTrue):
            return "true"
        if isinstance(node, LiteralFalse):
            return "false"
        if isinstance(node, Not):
            return f"(!{render(node.child)})"
        if isinstance(node, UNARY_TYPES):
            return f"({_UNARY_TEMPORAL_SYMBOLS[type(node)]} {render(node.child)})"
        sym = _BINARY_SYMBOLS[type(node)]
        return f"({render(node.left)} {sym} {render(node.right)})"

    return render(f)


def mutate_malformed(f: Formula, seed: int | random.Random = 0) -> str:
    """Print f and apply exactly one documented mutation, verified to
    fail check_wff; the mutation and target are resampled until a
    malformed string is found.  Raises MutationExhaustedError when no
    mutation of this formula is malformed (bare atoms and literals).
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    printed = print_ltl(f)
    from .formulas import BINARY_TYPES, iter_subformulas

    binaries = [node for node in iter_subformulas(f) if isinstance(node, BINARY_TYPES)]
    paren_positions = [i for i, c in enumerate(printed) if c in "()"]

    candidates: list[tuple[str, object]] = []
    for node in binaries:
        candidates.append(("delete_left_operand", node))
        candidates.append(("delete_right_operand", node))
        candidates.append(("duplicate_binary_operator", node))
    for pos in paren_positions:
        candidates.append(("drop_parenthesis", pos))
    for cut in range(1, len(printed)):
        candidates.append(("truncate_suffix", cut))

    rng.shuffle(candidates)
    for mode, arg in candidates:
        if mode in ("delete_left_operand", "delete_right_operand",
                    "duplicate_binary_operator"):
            mutated = _print_with_mutation(f, arg, mode)
        elif mode == "drop_parenthesis":
            mutated = printed[:arg] + printed[arg + 1:]
        else:
            mutated = printed[:arg]
        if not mutated.strip():
            continue
        if not check_wff(mutated).well_formed:
            return mutated
    raise MutationExhaustedError(
        f"no mutation of {printed!r} is malformed"
    )


# ---------------------------------------------------------------------------
# corpus builders

def build_wff_corpus(
    count: int,
    vocab: Sequence[str] = ("p", "q", "r"),
    seed: int = 0,
    well_formed_ratio: float = 0.5,
    max_depth: int = 8,
) -> list[WffItem]:
    """A well-formedness corpus: a seeded mix of grammar-sampled strings
    and their malformed mutations, geometric depth capped at max_depth."""
    rng = random.Random(seed)
    items: list[WffItem] = []
    n_good = round(count * well_formed_ratio)
    for i in range(count):
        # geometric depth distribution, capped
        depth = 0
        while depth < max_depth and rng.random() < 0.6:
            depth += 1
        formula = sample_formula(vocab, (depth, depth), seed=rng)
        if i < n_good:
            items.append(WffItem(
                id=f"wff-{i:04d}",
                formula_text=print_ltl(formula),
                label="well_formed",
                ast_depth=depth,
            ))
        else:
            try:
                text = mutate_malformed(formula, seed=rng)
            except MutationExhaustedError:
                # atoms survive most mutations; a binary wrapper never does
                text = mutate_malformed(And(formula, formula), seed=rng)
            items.append(WffItem(
                id=f"wff-{i:04d}", formula_text=text, label="malformed",
                ast_depth=depth,
            ))
    return items


def build_trace_corpus(
    items: Sequence[Nl2LtlItem], cfg: OracleConfig | None = None
) -> list[TraceItem]:
    """One satisfying and one violating trace per formula where the
    bounded search finds them; sides the search cannot produce are
    logged and skipped.  Output order is shuffled under the config seed.
    """
    cfg = cfg or OracleConfig()
    out: list[TraceItem] = []
    for item in items:
        try:
            pair = find_traces(item.gt_formula, cfg)
        except BudgetExceededError as exc:
            log.warning("skipping %s: %s", item.id, exc)
            continue
        if pair.satisfying is not None:
            out.append(TraceItem(
                id=f"{item.id}-sat", formula=item.gt_formula,
                trace=pair.satisfying, label="satisfying",
            ))
        else:
            log.info("no satisfying trace for %s within bound", item.id)
        if pair.violating is not None:
            out.append(TraceItem(
                id=f"{item.id}-viol", formula=item.gt_formula,
                trace=pair.violating, label="violating",
            ))
        else:
            log.info("no violating trace for %s within bound", item.id)
    random.Random(cfg.rng_seed).shuffle(out)
    return out


# ---------------------------------------------------------------------------
# synthetic corpus for offline end-to-end runs

_NL_TEMPLATES: tuple[tuple[str, str], ...] = (
    # (formula pattern, NL rendering); {a}/{b} name the two phrase slots
    ("G {a}", "It is always the case that {a}."),
    ("F {a}", "Eventually, {a}."),
    ("X {a}", "In the next step, {a}."),
    ("G ({a} -> F {b})", "Whenever {a}, eventually {b}."),
    ("{a} U {b}", "{a} until {b}."),
    ("G ({a} -> X {b})", "Whenever {a}, {b} in the following step."),
    ("!({a} & {b})", "Never {a} and {b} at the same time."),
    ("F ({a} & {b})", "At some point, both {a} and {b}."),
    ("G {a} | F {b}", "Either always {a}, or eventually {b}."),
    ("{a} -> F {b}", "If {a}, then eventually {b}."),
)

_PHRASES = (
    "the light is on", "the door is open", "the alarm rings",
    "the lock is held", "the request is pending", "the grant is issued",
)


def build_synthetic_nl2ltl(count: int = 306, seed: int = 0) -> list[Nl2LtlItem]:
    """A deterministic corpus in the nl2ltl schema, sized and shaped for
    offline end-to-end runs: small vocabularies, future-only formulas,
    temporal operators only in positive positions."""
    rng = random.Random(seed)
    items: list[Nl2LtlItem] = []
    for i in range(count):
        pattern, nl_template = _NL_TEMPLATES[i % len(_NL_TEMPLATES)]
        var_a, var_b = "x1", "x2"
        phrase_a, phrase_b = rng.sample(_PHRASES, 2)
        formula = parse_ltl(pattern.format(a=var_a, b=var_b))
        ap_map = [(var_a, phrase_a)]
        if var_b in collect_aps(formula):
            ap_map.append((var_b, phrase_b))
        items.append(Nl2LtlItem(
            id=f"syn-{i:04d}",
            nl=nl_template.format(a=phrase_a, b=phrase_b),
            ap_map=tuple(ap_map),
            gt_formula=formula,
            tense="future",
        ))
    return items
