"""Scoring: string/set similarity, confusion-matrix statistics, and the
semantic aggregates reported by the harness.

Every rate defines 0/0 as 0 so aggregates over empty slices stay
interpretable.  Not-meaningful records are excluded from the equivalence
accuracy denominator and reported separately as a count and share.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(
                previous[j] + 1,        # deletion
                current[j - 1] + 1,     # insertion
                previous[j - 1] + cost, # substitution
            ))
        previous = current
    return previous[-1]


def levenshtein_similarity(a: str, b: str) -> float:
    """1 - d/max(|a|,|b|); two empty strings are fully similar."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """|a∩b| / |a∪b|; two empty sets are fully similar."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 1.0
    return len(sa & sb) / len(union)


_WS_RE = re.compile(r"\s+")
_TERMINAL_PUNCT_RE = re.compile(r"[.,;:!?]+\Z")


def normalize_phrase(phrase: str) -> str:
    """Lowercase, trim, collapse internal whitespace, strip terminal
    punctuation."""
    out = _WS_RE.sub(" ", phrase.strip().lower())
    return _TERMINAL_PUNCT_RE.sub("", out).strip()


def token_set(phrases: Iterable[str]) -> set[str]:
    tokens: set[str] = set()
    for phrase in phrases:
        tokens.update(normalize_phrase(phrase).split())
    return tokens


@dataclass(frozen=True)
class PropMatchResult:
    """Greedy one-to-one phrase matching between predicted and gold."""

    matches: tuple[tuple[str, str, float], ...]  # (predicted, gold, similarity)
    precision: float
    recall: float
    f1: float
    phrase_jaccard: float
    token_jaccard: float
    mean_matched_similarity: float


def match_prop_sets(
    predicted: Sequence[str], gold: Sequence[str], threshold: float = 0.75
) -> PropMatchResult:
    """Match extracted phrases against gold phrases.

    Phrases are normalized, then paired greedily in descending
    normalized-Levenshtein-similarity order; a pair counts as a match
    when its similarity reaches the threshold.  The matching is
    one-to-one, so raising the threshold never increases the match
    count.
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    norm_pred = [normalize_phrase(p) for p in predicted]
    norm_gold = [normalize_phrase(g) for g in gold]

    scored = []
    for i, np_ in enumerate(norm_pred):
        for j, ng in enumerate(norm_gold):
            sim = levenshtein_similarity(np_, ng)
            if sim >= threshold:
                # negative similarity sorts descending; indices break ties
                scored.append((-sim, i, j))
    scored.sort()

    used_pred: set[int] = set()
    used_gold: set[int] = set()
    matches: list[tuple[str, str, float]] = []
    for neg_sim, i, j in scored:
        if i in used_pred or j in used_gold:
            continue
        used_pred.add(i)
        used_gold.add(j)
        matches.append((predicted[i], gold[j], -neg_sim))

    n_match = len(matches)
    precision = n_match / len(predicted) if predicted else 0.0
    recall = n_match / len(gold) if gold else 0.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    mean_sim = sum(sim for _, _, sim in matches) / n_match if n_match else 0.0
    return PropMatchResult(
        matches=tuple(matches),
        precision=precision,
        recall=recall,
        f1=f1,
        phrase_jaccard=jaccard(norm_pred, norm_gold),
        token_jaccard=jaccard(token_set(predicted), token_set(gold)),
        mean_matched_similarity=mean_sim,
    )


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class ClassificationMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    fpr: float
    fnr: float


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def classification_metrics(c: ConfusionCounts) -> ClassificationMetrics:
    precision = _ratio(c.tp, c.tp + c.fp)
    recall = _ratio(c.tp, c.tp + c.fn)
    return ClassificationMetrics(
        accuracy=_ratio(c.tp + c.tn, c.total),
        precision=precision,
        recall=recall,
        f1=(
            2 * precision * recall / (precision + recall)
            if precision + recall > 0
            else 0.0
        ),
        fpr=_ratio(c.fp, c.fp + c.tn),
        fnr=_ratio(c.fn, c.fn + c.tp),
    )


@dataclass(frozen=True)
class SemanticTally:
    """Raw counts behind a semantic-equivalence table row.

    Partition invariant: equivalent + not_equivalent + not_meaningful
    equals total, and equivalence implies both entailment directions so
    equivalent never exceeds sound or complete.
    """

    equivalent: int
    not_equivalent: int
    not_meaningful: int
    sound: int
    complete: int
    syntactically_valid: int
    total: int

    def __post_init__(self):
        if self.equivalent + self.not_equivalent + self.not_meaningful != self.total:
            raise ValueError("equivalent + not_equivalent + not_meaningful != total")
        if self.equivalent > self.sound or self.equivalent > self.complete:
            raise ValueError("equivalent records must be sound and complete")


@dataclass(frozen=True)
class SemanticSummary:
    tally: SemanticTally
    eq_accuracy: float         # equivalent / (equivalent + not_equivalent)
    soundness_rate: float      # sound / meaningful
    completeness_rate: float   # complete / meaningful
    syntax_rate: float         # syntactically_valid / total
    nm_share: float            # not_meaningful / total


def aggregate_semantic(records: Iterable) -> SemanticSummary:
    """Tally semantic verdicts over scored records.

    Records are duck-typed; each needs `nm_reason` (None when the
    verification query could be posed), `equivalence_holds`,
    `soundness_holds`, `completeness_holds`, and `syntactically_valid`.
    Not-meaningful records are excluded from the accuracy denominators
    and reported separately.
    """
    equivalent = not_equivalent = not_meaningful = 0
    sound = complete = syntactically_valid = total = 0
    for record in records:
        total += 1
        if record.syntactically_valid:
            syntactically_valid += 1
        if record.nm_reason is not None:
            not_meaningful += 1
            continue
        if record.equivalence_holds:
            equivalent += 1
        else:
            not_equivalent += 1
        if record.soundness_holds:
            sound += 1
        if record.completeness_holds:
            complete += 1
    tally = SemanticTally(
        equivalent=equivalent,
        not_equivalent=not_equivalent,
        not_meaningful=not_meaningful,
        sound=sound,
        complete=complete,
        syntactically_valid=syntactically_valid,
        total=total,
    )
    meaningful = equivalent + not_equivalent
    return SemanticSummary(
        tally=tally,
        eq_accuracy=_ratio(equivalent, meaningful),
        soundness_rate=_ratio(sound, meaningful),
        completeness_rate=_ratio(complete, meaningful),
        syntax_rate=_ratio(syntactically_valid, total),
        nm_share=_ratio(not_meaningful, total),
    )
