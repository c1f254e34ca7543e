"""Run orchestration: prompt each item, parse the reply, verify it, and
keep a self-contained record per item.

Per task the verification is:

    nl2ltl / nl2pltl  equivalence plus both entailment directions
                      against the ground-truth formula (soundness is
                      ground truth => prediction, completeness the
                      converse)
    wff               decision compared to the grammar verdict
    tracechar         decision compared to the evaluator's outcome
    tracegen          both returned traces re-evaluated on the formula
    nl2pl             greedy phrase matching against the gold phrases

Every failure (client error, unparseable reply, vocabulary mismatch,
budget) is absorbed into a typed not-meaningful record; the run never
loses an item.  With a transcript cache, reruns resume from the cached
replies.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import time
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .. import __version__
from ..datasets import ApExtractionItem, Nl2LtlItem, TraceItem, WffItem
from ..errors import ConfigError
from ..formulas import AtomicProp, Formula, UNARY_TYPES, collect_aps
from ..metrics import match_prop_sets
from ..oracle import NMReason, OracleConfig, OracleVerdict, check_entailment, check_equivalence
from ..parser import check_wff
from ..printer import print_ltl, print_ltl_bare
from ..prompts import (
    CandidateTraces,
    Decision,
    Exemplar,
    Interface,
    ParseFailure,
    PromptSpec,
    RenderedPrompt,
    Strategy,
    Task,
    TwoTurnScript,
    build_prompt,
    parse_decision_reply,
    parse_formula_reply,
    parse_phrase_list_reply,
    parse_trace_reply,
    render_ap_mapping,
)
from ..semantics import satisfies
from ..traces import EvalOutcome, format_trace, format_trace_code_literal
from .answers import reference_answer, task_formula
from .clients import Client, ReplayClient, SendResult, TranscriptCache, send

NM_PARSE_FAILURE = "parse_failure"
NM_VOCABULARY_MISMATCH = "vocabulary_mismatch"
NM_BUDGET_EXCEEDED = "budget_exceeded"

_ORACLE_NM = {
    NMReason.PARSE_FAILURE: NM_PARSE_FAILURE,
    NMReason.VOCABULARY_MISMATCH: NM_VOCABULARY_MISMATCH,
    NMReason.BUDGET_EXCEEDED: NM_BUDGET_EXCEEDED,
}


@dataclass
class EvalRecord:
    """One scored item of one run; self-contained for re-scoring."""

    run_id: str
    item_id: str
    task: str
    interface: str
    strategy: str
    model_id: str
    prompt_hashes: tuple[str, ...] = ()
    raw_replies: tuple[str, ...] = ()
    artifact: str | None = None
    syntactically_valid: bool = False
    nm_reason: str | None = None
    equivalence_holds: bool | None = None
    soundness_holds: bool | None = None
    completeness_holds: bool | None = None
    equivalence_witness: str | None = None
    predicted_label: str | None = None
    gold_label: str | None = None
    correct: bool | None = None
    sat_trace_valid: bool | None = None
    viol_trace_valid: bool | None = None
    extraction_precision: float | None = None
    extraction_recall: float | None = None
    extraction_f1: float | None = None
    extraction_phrase_jaccard: float | None = None
    extraction_token_jaccard: float | None = None
    extraction_lev_similarity: float | None = None
    latency_s: float = 0.0
    started_at: str = ""
    finished_at: str = ""

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "EvalRecord":
        kwargs = dict(data)
        for key in ("prompt_hashes", "raw_replies"):
            if key in kwargs and isinstance(kwargs[key], list):
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce a run byte-for-byte with a replay
    client."""

    run_id: str
    dataset_id: str
    dataset_hash: str
    task: str
    interface: str
    strategy: str
    model_id: str
    client_kind: str
    template_ids: tuple[str, ...]
    template_hashes: tuple[str, ...]
    oracle: dict
    seed: int
    code_version: str = __version__
    decoding: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out


def file_hash(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _iso(ts: float) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%S.%fZ"
    )


def rename_aps(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Structurally rename atoms; names absent from the mapping stay."""
    if isinstance(f, AtomicProp):
        return AtomicProp(mapping.get(f.name, f.name))
    if isinstance(f, UNARY_TYPES):
        return type(f)(rename_aps(f.child, mapping))
    if hasattr(f, "left"):
        return type(f)(
            rename_aps(f.left, mapping), rename_aps(f.right, mapping)
        )
    return f


def item_slots(
    task: Task, interface: Interface, item, ap_free: bool = False
) -> dict[str, str]:
    """The template slot values one item supplies for one task."""
    if task in (Task.NL2LTL, Task.NL2PLTL):
        if not isinstance(item, Nl2LtlItem):
            raise ConfigError(f"task {task.value} needs nl2ltl items")
        return {
            "natural_language": item.nl,
            "atomic_propositions": "" if ap_free else render_ap_mapping(item.ap_map),
        }
    if task is Task.WFF:
        if not isinstance(item, WffItem):
            raise ConfigError("task wff needs wff items")
        return {"formula": item.formula_text}
    if task is Task.TRACECHAR:
        if not isinstance(item, TraceItem):
            raise ConfigError("task tracechar needs trace items")
        if interface is Interface.CODE_COMPLETION:
            from ..constructor import render_constructor_form

            return {
                "formula_constructor": render_constructor_form(item.formula),
                "trace_literal": format_trace_code_literal(item.trace),
            }
        return {
            "formula": print_ltl_bare(item.formula),
            "trace": format_trace(item.trace),
        }
    if task is Task.TRACEGEN:
        formula = task_formula(item)
        if interface is Interface.CODE_COMPLETION:
            from ..constructor import render_constructor_form

            return {"formula_constructor": render_constructor_form(formula)}
        return {"formula": print_ltl_bare(formula)}
    if task is Task.NL2PL:
        if not isinstance(item, (ApExtractionItem, Nl2LtlItem)):
            raise ConfigError("task nl2pl needs nl2pl or nl2ltl items")
        return {"natural_language": item.nl}
    raise ConfigError(f"unknown task {task!r}")


def exemplar_input_block(task: Task, interface: Interface, item) -> str:
    slots = item_slots(task, interface, item)
    lines = []
    for name, value in slots.items():
        label = name.replace("_", " ").capitalize()
        lines.append(f"{label}: {value}")
    return "\n".join(lines)


def build_exemplars(
    task: Task, interface: Interface, items: Sequence,
    cfg: OracleConfig | None = None,
) -> tuple[Exemplar, ...]:
    """Few-shot exemplars from the first three items of an exemplar
    corpus (held out from scoring)."""
    if len(items) < 3:
        raise ConfigError("few-shot prompting needs at least 3 exemplar items")
    return tuple(
        Exemplar(
            input_block=exemplar_input_block(task, interface, item),
            answer=reference_answer(task, interface, item, cfg),
        )
        for item in items[:3]
    )


def _score_formula_task(
    record: EvalRecord, item: Nl2LtlItem, reply: str, interface: Interface,
    cfg: OracleConfig, alignment: Mapping[str, str] | None,
) -> None:
    parsed = parse_formula_reply(reply, interface)
    if isinstance(parsed, ParseFailure):
        record.nm_reason = NM_PARSE_FAILURE
        record.artifact = None
        return
    record.syntactically_valid = True
    if alignment:
        parsed = rename_aps(parsed, alignment)
    record.artifact = print_ltl(parsed)
    if any(name not in item.vocabulary for name in collect_aps(parsed)):
        record.nm_reason = NM_VOCABULARY_MISMATCH
        return
    equivalence = check_equivalence(item.gt_formula, parsed, cfg)
    if equivalence.is_not_meaningful:
        record.nm_reason = _ORACLE_NM[equivalence.reason]
        return
    record.equivalence_holds = equivalence.is_holds
    if equivalence.is_fails and equivalence.witness is not None:
        record.equivalence_witness = format_trace(equivalence.witness)
    if equivalence.is_holds:
        # identical outcomes on every trace entail each other
        record.soundness_holds = True
        record.completeness_holds = True
        return
    soundness = check_entailment(item.gt_formula, parsed, cfg)
    completeness = check_entailment(parsed, item.gt_formula, cfg)
    if soundness.is_not_meaningful or completeness.is_not_meaningful:
        record.nm_reason = NM_BUDGET_EXCEEDED
        record.equivalence_holds = None
        record.equivalence_witness = None
        return
    record.soundness_holds = soundness.is_holds
    record.completeness_holds = completeness.is_holds


def _score_decision_task(
    record: EvalRecord, gold_yes: bool, reply: str
) -> None:
    decision = parse_decision_reply(reply)
    record.syntactically_valid = decision is not Decision.UNPARSEABLE
    record.predicted_label = decision.value
    record.gold_label = "yes" if gold_yes else "no"
    record.correct = (decision is Decision.YES) == gold_yes and (
        decision is not Decision.UNPARSEABLE
    )
    record.artifact = decision.value


def _score_tracegen_task(
    record: EvalRecord, formula: Formula, reply: str, interface: Interface
) -> None:
    parsed = parse_trace_reply(reply, interface)
    if isinstance(parsed, ParseFailure):
        record.nm_reason = NM_PARSE_FAILURE
        return
    record.syntactically_valid = True
    parts = []
    if parsed.satisfying is not None:
        record.sat_trace_valid = (
            satisfies(formula, parsed.satisfying) is EvalOutcome.DEFINED_TRUE
        )
        parts.append(f"satisfying: {format_trace(parsed.satisfying)}")
    else:
        record.sat_trace_valid = False
    if parsed.violating is not None:
        record.viol_trace_valid = (
            satisfies(formula, parsed.violating) is EvalOutcome.DEFINED_FALSE
        )
        parts.append(f"violating: {format_trace(parsed.violating)}")
    else:
        record.viol_trace_valid = False
    record.artifact = " ".join(parts) if parts else None
    record.correct = bool(record.sat_trace_valid and record.viol_trace_valid)


def _score_extraction_task(
    record: EvalRecord, gold_phrases: Sequence[str], reply: str, threshold: float
) -> None:
    phrases = parse_phrase_list_reply(reply)
    if not phrases:
        record.nm_reason = NM_PARSE_FAILURE
        return
    record.syntactically_valid = True
    record.artifact = "; ".join(phrases)
    result = match_prop_sets(phrases, list(gold_phrases), threshold)
    record.extraction_precision = result.precision
    record.extraction_recall = result.recall
    record.extraction_f1 = result.f1
    record.extraction_phrase_jaccard = result.phrase_jaccard
    record.extraction_token_jaccard = result.token_jaccard
    record.extraction_lev_similarity = result.mean_matched_similarity
    record.correct = result.f1 == 1.0


def run_task(
    task: Task,
    items: Sequence,
    interface: Interface,
    strategy: Strategy,
    client: Client,
    oracle_cfg: OracleConfig | None = None,
    *,
    cache: TranscriptCache | None = None,
    exemplars: tuple[Exemplar, ...] = (),
    ap_free: bool = False,
    alignment_overrides: Mapping[str, Mapping[str, str]] | None = None,
    run_id: str = "run",
    match_threshold: float = 0.75,
    max_concurrency: int = 1,
    clock: Callable[[], float] | None = None,
) -> list[EvalRecord]:
    """Evaluate every item of one (task, interface, strategy) cell.

    Returns exactly one record per item, in dataset order.  With a
    replay client the wall clock is frozen so the records, and therefore
    the report bundle, are byte-deterministic.
    """
    oracle_cfg = oracle_cfg or OracleConfig()
    spec = PromptSpec(task, interface, strategy, exemplars)
    if clock is None:
        clock = (lambda: 0.0) if isinstance(client, ReplayClient) else time.time

    def evaluate(item) -> EvalRecord:
        record = EvalRecord(
            run_id=run_id,
            item_id=item.id,
            task=task.value,
            interface=interface.value,
            strategy=strategy.value,
            model_id=client.model_id,
        )
        started = clock()
        record.started_at = _iso(started)
        try:
            prompt = build_prompt(
                spec, item_slots(task, interface, item, ap_free), item.id
            )
        except ConfigError:
            raise
        result = send(client, prompt, cache=cache, clock=clock)
        record.prompt_hashes = result.prompt_hashes
        record.raw_replies = result.replies
        record.latency_s = result.latency_s
        if result.error_kind is not None:
            record.nm_reason = f"client_{result.error_kind}"
            record.finished_at = _iso(clock())
            return record
        reply = result.replies[-1]

        if task in (Task.NL2LTL, Task.NL2PLTL):
            alignment = (alignment_overrides or {}).get(item.id)
            _score_formula_task(record, item, reply, interface, oracle_cfg, alignment)
        elif task is Task.WFF:
            _score_decision_task(record, check_wff(item.formula_text).well_formed, reply)
        elif task is Task.TRACECHAR:
            gold = satisfies(item.formula, item.trace) is EvalOutcome.DEFINED_TRUE
            _score_decision_task(record, gold, reply)
        elif task is Task.TRACEGEN:
            _score_tracegen_task(record, task_formula(item), reply, interface)
        elif task is Task.NL2PL:
            gold = (
                item.gold_phrases
                if isinstance(item, ApExtractionItem)
                else tuple(phrase for _, phrase in item.ap_map)
            )
            _score_extraction_task(record, gold, reply, match_threshold)
        else:
            raise ConfigError(f"unknown task {task!r}")
        record.finished_at = _iso(clock())
        return record

    if max_concurrency > 1 and getattr(client, "concurrent_safe", False):
        with concurrent.futures.ThreadPoolExecutor(max_concurrency) as pool:
            records = list(pool.map(evaluate, items))
    else:
        records = [evaluate(item) for item in items]
    assert len(records) == len(items)
    return records


def write_records(records: Sequence[EvalRecord], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")


def read_records(path: str | Path) -> list[EvalRecord]:
    records = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(EvalRecord.from_dict(json.loads(line)))
    return records
