"""Three-valued finite-trace evaluation.

`eval_at` / `satisfies` are the production entry points, backed by a
compiled kernel when the extension built, otherwise by a pure-Python
kernel with identical behavior.  Set LTLKIT_EVAL_BACKEND=python (or =c)
to force a backend.  `eval_reference` is the independent naive oracle.

All functions are pure and all inputs immutable, so evaluation is safe
under unrestricted concurrency.
"""

from __future__ import annotations

import os

from ..formulas import Formula
from ..traces import EvalOutcome, Trace
from . import _pykernel
from .program import Program, compile_formula, encode_trace, outcome_from_code
from .reference import eval_reference

__all__ = [
    "BACKEND_NAME",
    "CompiledFormula",
    "eval_at",
    "eval_reference",
    "satisfies",
]


def _select_backend():
    forced = os.environ.get("LTLKIT_EVAL_BACKEND", "").strip().lower()
    if forced == "python":
        return _pykernel
    try:
        from . import _ckernel
    except ImportError:
        if forced == "c":
            raise ImportError(
                "LTLKIT_EVAL_BACKEND=c but the compiled kernel is not built"
            )
        return _pykernel
    return _ckernel


_kernel = _select_backend()
BACKEND_NAME: str = _kernel.BACKEND_NAME


class CompiledFormula:
    """A formula compiled once for evaluation against many traces."""

    def __init__(self, formula: Formula):
        self.formula = formula
        self._program: Program = compile_formula(formula)

    @property
    def ap_names(self) -> tuple[str, ...]:
        return self._program.ap_names

    def outcome_at(self, trace: Trace, pos: int) -> EvalOutcome:
        if pos < 0 or pos >= len(trace):
            return EvalOutcome.UNDEFINED
        values = encode_trace(self._program, trace)
        return outcome_from_code(self.code_on_encoded(values, len(trace), pos))

    def code_on_encoded(self, ap_values, n_pos: int, pos: int) -> int:
        """Raw value code on a pre-encoded trace; oracle fast path."""
        p = self._program
        return _kernel.eval_program(p.ops, p.arg0, p.arg1, ap_values, n_pos, pos)


def eval_at(f: Formula, t: Trace, pos: int) -> EvalOutcome:
    """Three-valued outcome of f on t at pos; total over all positions."""
    return CompiledFormula(f).outcome_at(t, pos)


def satisfies(f: Formula, t: Trace) -> EvalOutcome:
    """eval_at at position 0: DefinedTrue is satisfying, DefinedFalse is
    violating, Undefined is not meaningful for trace-task scoring."""
    return eval_at(f, t, 0)
