"""Deliberately naive recursive evaluator, used as an independent oracle.

This is a direct transcription of the recursive three-valued definition:
every operator case first guards the position range, boolean connectives
evaluate both operands and let an undefined operand dominate, the
scanning operators walk positions in index order and stop at the first
undefined child value, and Yesterday at position 0 is DefinedFalse.  It
shares no code with the table-driven kernels; the differential test in
the acceptance suite pits the two against each other.
"""

from __future__ import annotations

from ..formulas import (
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
from ..traces import EvalOutcome, Trace

_TRUE = EvalOutcome.DEFINED_TRUE
_FALSE = EvalOutcome.DEFINED_FALSE
_UNDEF = EvalOutcome.UNDEFINED


def eval_reference(f: Formula, t: Trace, pos: int) -> EvalOutcome:
    n = len(t)
    if pos < 0 or pos >= n:
        return _UNDEF

    if isinstance(f, AtomicProp):
        value = t[pos].value_of(f.name)
        if value is None:
            return _UNDEF
        return _TRUE if value else _FALSE

    if isinstance(f, LiteralTrue):
        return _TRUE

    if isinstance(f, LiteralFalse):
        return _FALSE

    if isinstance(f, Not):
        inner = eval_reference(f.child, t, pos)
        if inner is _UNDEF:
            return _UNDEF
        return _FALSE if inner is _TRUE else _TRUE

    if isinstance(f, (And, Or, Implies, Equiv)):
        left = eval_reference(f.left, t, pos)
        right = eval_reference(f.right, t, pos)
        if left is _UNDEF or right is _UNDEF:
            return _UNDEF
        lv = left is _TRUE
        rv = right is _TRUE
        if isinstance(f, And):
            result = lv and rv
        elif isinstance(f, Or):
            result = lv or rv
        elif isinstance(f, Implies):
            result = (not lv) or rv
        else:
            result = lv == rv
        return _TRUE if result else _FALSE

    if isinstance(f, Since):
        found_b = False
        i = pos
        while i >= 0:
            r = eval_reference(f.right, t, i)
            if r is _UNDEF:
                return _UNDEF
            if r is _TRUE:
                found_b = True
                break
            i -= 1
        if not found_b:
            return _FALSE
        j = i + 1
        while j <= pos:
            r = eval_reference(f.left, t, j)
            if r is _UNDEF:
                return _UNDEF
            if r is _FALSE:
                return _FALSE
            j += 1
        return _TRUE

    if isinstance(f, Until):
        found_b = False
        i = pos
        while i < n:
            r = eval_reference(f.right, t, i)
            if r is _UNDEF:
                return _UNDEF
            if r is _TRUE:
                found_b = True
                break
            i += 1
        if not found_b:
            return _FALSE
        j = pos
        while j < i:
            r = eval_reference(f.left, t, j)
            if r is _UNDEF:
                return _UNDEF
            if r is _FALSE:
                return _FALSE
            j += 1
        return _TRUE

    if isinstance(f, Next):
        if pos + 1 < n:
            return eval_reference(f.child, t, pos + 1)
        return _UNDEF

    if isinstance(f, Globally):
        for i in range(pos, n):
            r = eval_reference(f.child, t, i)
            if r is _UNDEF:
                return _UNDEF
            if r is _FALSE:
                return _FALSE
        return _TRUE

    if isinstance(f, Eventually):
        for i in range(pos, n):
            r = eval_reference(f.child, t, i)
            if r is _UNDEF:
                return _UNDEF
            if r is _TRUE:
                return _TRUE
        return _FALSE

    if isinstance(f, Once):
        for i in range(0, pos + 1):
            r = eval_reference(f.child, t, i)
            if r is _UNDEF:
                return _UNDEF
            if r is _TRUE:
                return _TRUE
        return _FALSE

    if isinstance(f, Historically):
        for i in range(0, pos + 1):
            r = eval_reference(f.child, t, i)
            if r is _UNDEF:
                return _UNDEF
            if r is _FALSE:
                return _FALSE
        return _TRUE

    if isinstance(f, Yesterday):
        if pos >= 1:
            return eval_reference(f.child, t, pos - 1)
        return _FALSE

    raise TypeError(f"not a formula node: {f!r}")
