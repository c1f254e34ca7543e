"""Bounded semantic decision procedures.

Equivalence, directional entailment, and satisfying/violating trace
search are all discharged by exhaustive enumeration of complete traces
over a vocabulary up to a length bound, under the three-valued finite
trace semantics.  Enumeration cost is checked against an explicit budget
before any work starts; exceeding it is an error, never silent
truncation.

Queries are pure functions of their config (seed included): verdicts and
witnesses are reproducible.
"""

from __future__ import annotations

import random
from array import array
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

from .errors import BudgetExceededError
from .formulas import APVocabulary, Formula, collect_aps
from .semantics import CompiledFormula, satisfies
from .semantics.program import VAL_FALSE, VAL_TRUE, VAL_UNDEF
from .traces import EvalOutcome, State, Trace

DEFAULT_MAX_TRACE_LENGTH = 5
DEFAULT_MAX_VOCAB_SIZE = 4
DEFAULT_TRACE_BUDGET = 2_000_000


@dataclass(frozen=True)
class OracleConfig:
    vocabulary: APVocabulary | None = None
    max_trace_length: int = DEFAULT_MAX_TRACE_LENGTH
    max_vocab_size: int = DEFAULT_MAX_VOCAB_SIZE
    rng_seed: int = 0
    trace_budget: int = DEFAULT_TRACE_BUDGET

    def __post_init__(self):
        if self.max_trace_length < 1:
            raise ValueError("max_trace_length must be positive")
        if self.max_vocab_size < 1:
            raise ValueError("max_vocab_size must be positive")
        if self.trace_budget < 1:
            raise ValueError("trace_budget must be positive")

    @property
    def lengths(self) -> range:
        return range(1, self.max_trace_length + 1)


class NMReason(Enum):
    PARSE_FAILURE = "ParseFailure"
    VOCABULARY_MISMATCH = "VocabularyMismatch"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class OracleVerdict:
    """Holds, Fails with a replayable witness, or NotMeaningful."""

    status: str  # "holds" | "fails" | "not_meaningful"
    witness: Trace | None = None
    lhs_outcome: EvalOutcome | None = None
    rhs_outcome: EvalOutcome | None = None
    reason: NMReason | None = None

    @classmethod
    def holds(cls) -> "OracleVerdict":
        return cls("holds")

    @classmethod
    def fails(cls, witness: Trace, lhs: EvalOutcome, rhs: EvalOutcome) -> "OracleVerdict":
        return cls("fails", witness=witness, lhs_outcome=lhs, rhs_outcome=rhs)

    @classmethod
    def not_meaningful(cls, reason: NMReason) -> "OracleVerdict":
        return cls("not_meaningful", reason=reason)

    @property
    def is_holds(self) -> bool:
        return self.status == "holds"

    @property
    def is_fails(self) -> bool:
        return self.status == "fails"

    @property
    def is_not_meaningful(self) -> bool:
        return self.status == "not_meaningful"


@dataclass(frozen=True)
class TracePair:
    """A satisfying and/or violating trace for one formula, validated at
    construction."""

    formula: Formula
    satisfying: Trace | None = None
    violating: Trace | None = None
    undefined_skipped: int = 0

    def __post_init__(self):
        if self.satisfying is not None:
            got = satisfies(self.formula, self.satisfying)
            if got is not EvalOutcome.DEFINED_TRUE:
                raise ValueError(f"satisfying trace evaluates to {got.value}")
        if self.violating is not None:
            got = satisfies(self.formula, self.violating)
            if got is not EvalOutcome.DEFINED_FALSE:
                raise ValueError(f"violating trace evaluates to {got.value}")


def enumeration_cost(n_aps: int, lengths: Sequence[int]) -> int:
    """Number of complete traces: sum over lengths of (2^n_aps)^length."""
    per_state = 2 ** n_aps
    return sum(per_state ** length for length in lengths)


def _check_budget(n_aps: int, lengths: Sequence[int], cfg: OracleConfig) -> None:
    if n_aps > cfg.max_vocab_size:
        raise BudgetExceededError(
            f"vocabulary of {n_aps} propositions exceeds the guard of "
            f"{cfg.max_vocab_size}"
        )
    cost = enumeration_cost(n_aps, lengths)
    if cost > cfg.trace_budget:
        raise BudgetExceededError(
            f"enumeration of {cost} traces exceeds the budget of {cfg.trace_budget}"
        )


def _iter_masks(n_aps: int, lengths: Sequence[int], seed: int) -> Iterator[tuple[int, ...]]:
    """Yield every complete trace as a tuple of per-position bitmasks,
    lengths ascending, seeded permutation within each length."""
    per_state = 2 ** n_aps
    rng = random.Random(seed)
    for length in lengths:
        count = per_state ** length
        order = list(range(count))
        rng.shuffle(order)
        for index in order:
            masks = []
            for _ in range(length):
                masks.append(index % per_state)
                index //= per_state
            yield tuple(masks)


def _masks_to_trace(vocab: APVocabulary, masks: Sequence[int]) -> Trace:
    names = tuple(vocab)
    states = []
    for mask in masks:
        states.append(State(tuple(
            (name, bool((mask >> bit) & 1)) for bit, name in enumerate(names)
        )))
    return Trace(tuple(states))


def enumerate_traces(
    vocab: APVocabulary,
    lengths: Sequence[int],
    seed: int = 0,
    cfg: OracleConfig | None = None,
) -> Iterator[Trace]:
    """Every complete trace over vocab with length in `lengths`, exactly
    once; lengths ascending, seeded permutation within each length.

    Raises BudgetExceededError up front when the enumeration would
    exceed the budget.
    """
    cfg = cfg or OracleConfig()
    _check_budget(len(vocab), lengths, cfg)
    for masks in _iter_masks(len(vocab), lengths, seed):
        yield _masks_to_trace(vocab, masks)


class _CompiledOnVocab:
    """A formula compiled against a shared enumeration vocabulary."""

    def __init__(self, formula: Formula, vocab: APVocabulary):
        self._compiled = CompiledFormula(formula)
        index = {name: bit for bit, name in enumerate(vocab)}
        # propositions outside the vocabulary stay unassigned (-1)
        self._bits = tuple(index.get(name, -1) for name in self._compiled.ap_names)

    def code_on_masks(self, masks: Sequence[int]) -> int:
        n_pos = len(masks)
        values = array("b", bytes(len(self._bits) * n_pos))
        k = 0
        for bit in self._bits:
            for mask in masks:
                if bit < 0:
                    values[k] = VAL_UNDEF
                else:
                    values[k] = VAL_TRUE if (mask >> bit) & 1 else VAL_FALSE
                k += 1
        return self._compiled.code_on_encoded(values, n_pos, 0)


_CODE_TO_OUTCOME = {
    VAL_FALSE: EvalOutcome.DEFINED_FALSE,
    VAL_TRUE: EvalOutcome.DEFINED_TRUE,
    VAL_UNDEF: EvalOutcome.UNDEFINED,
}


def _resolve_vocab(cfg: OracleConfig, *formulas: Formula) -> APVocabulary | OracleVerdict:
    needed = APVocabulary.of(
        name for f in formulas for name in collect_aps(f)
    )
    if cfg.vocabulary is None:
        return needed
    if any(name not in cfg.vocabulary for name in needed):
        return OracleVerdict.not_meaningful(NMReason.VOCABULARY_MISMATCH)
    return cfg.vocabulary


def check_equivalence(
    f: Formula | None, g: Formula | None, cfg: OracleConfig | None = None
) -> OracleVerdict:
    """Holds iff f and g have the identical three-valued outcome at
    position 0 on every enumerated complete trace; otherwise Fails with
    the first differing trace in enumeration order."""
    cfg = cfg or OracleConfig()
    if f is None or g is None:
        return OracleVerdict.not_meaningful(NMReason.PARSE_FAILURE)
    vocab = _resolve_vocab(cfg, f, g)
    if isinstance(vocab, OracleVerdict):
        return vocab
    if f == g:
        # structurally identical formulas evaluate identically everywhere
        return OracleVerdict.holds()
    try:
        _check_budget(len(vocab), cfg.lengths, cfg)
    except BudgetExceededError:
        return OracleVerdict.not_meaningful(NMReason.BUDGET_EXCEEDED)
    cf = _CompiledOnVocab(f, vocab)
    cg = _CompiledOnVocab(g, vocab)
    for masks in _iter_masks(len(vocab), cfg.lengths, cfg.rng_seed):
        a = cf.code_on_masks(masks)
        b = cg.code_on_masks(masks)
        if a != b:
            return OracleVerdict.fails(
                _masks_to_trace(vocab, masks),
                _CODE_TO_OUTCOME[a],
                _CODE_TO_OUTCOME[b],
            )
    return OracleVerdict.holds()


def check_entailment(
    premise: Formula | None, conclusion: Formula | None, cfg: OracleConfig | None = None
) -> OracleVerdict:
    """Holds iff the conclusion is DefinedTrue on every enumerated
    complete trace where the premise is DefinedTrue.  An Undefined
    conclusion under a true premise is a failure (visible in the
    witness's rhs outcome)."""
    cfg = cfg or OracleConfig()
    if premise is None or conclusion is None:
        return OracleVerdict.not_meaningful(NMReason.PARSE_FAILURE)
    vocab = _resolve_vocab(cfg, premise, conclusion)
    if isinstance(vocab, OracleVerdict):
        return vocab
    if premise == conclusion:
        return OracleVerdict.holds()
    try:
        _check_budget(len(vocab), cfg.lengths, cfg)
    except BudgetExceededError:
        return OracleVerdict.not_meaningful(NMReason.BUDGET_EXCEEDED)
    cp = _CompiledOnVocab(premise, vocab)
    cc = _CompiledOnVocab(conclusion, vocab)
    for masks in _iter_masks(len(vocab), cfg.lengths, cfg.rng_seed):
        a = cp.code_on_masks(masks)
        if a != VAL_TRUE:
            continue
        b = cc.code_on_masks(masks)
        if b != VAL_TRUE:
            return OracleVerdict.fails(
                _masks_to_trace(vocab, masks),
                _CODE_TO_OUTCOME[a],
                _CODE_TO_OUTCOME[b],
            )
    return OracleVerdict.holds()


def find_traces(f: Formula, cfg: OracleConfig | None = None) -> TracePair:
    """Scan the enumeration in its seeded order for the first satisfying
    and first violating trace; either may be absent within the bound.
    Traces where the formula is Undefined are skipped and counted."""
    cfg = cfg or OracleConfig()
    vocab = cfg.vocabulary if cfg.vocabulary is not None else collect_aps(f)
    _check_budget(len(vocab), cfg.lengths, cfg)
    compiled = _CompiledOnVocab(f, vocab)
    satisfying: Trace | None = None
    violating: Trace | None = None
    skipped = 0
    for masks in _iter_masks(len(vocab), cfg.lengths, cfg.rng_seed):
        code = compiled.code_on_masks(masks)
        if code == VAL_UNDEF:
            skipped += 1
            continue
        if code == VAL_TRUE and satisfying is None:
            satisfying = _masks_to_trace(vocab, masks)
        elif code == VAL_FALSE and violating is None:
            violating = _masks_to_trace(vocab, masks)
        if satisfying is not None and violating is not None:
            break
    return TracePair(f, satisfying, violating, undefined_skipped=skipped)
