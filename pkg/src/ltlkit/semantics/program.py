"""Compact formula/trace encoding shared by the evaluation kernels.

A formula compiles to three parallel postorder arrays (children always
precede parents):

    ops[i]   opcode of node i
    arg0[i]  left-child node index, or atom slot for OP_AP, or -1
    arg1[i]  right-child node index, or -1

A trace encodes, per atom slot and position, one byte: 0 (false),
1 (true), or 2 (unassigned).  The kernels return the same codes, with 2
meaning Undefined.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

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

OP_AP = 0
OP_TRUE = 1
OP_FALSE = 2
OP_NOT = 3
OP_AND = 4
OP_OR = 5
OP_IMPLIES = 6
OP_EQUIV = 7
OP_NEXT = 8
OP_EVENTUALLY = 9
OP_GLOBALLY = 10
OP_UNTIL = 11
OP_YESTERDAY = 12
OP_ONCE = 13
OP_HISTORICALLY = 14
OP_SINCE = 15

VAL_FALSE = 0
VAL_TRUE = 1
VAL_UNDEF = 2

_OUTCOME_BY_CODE = {
    VAL_FALSE: EvalOutcome.DEFINED_FALSE,
    VAL_TRUE: EvalOutcome.DEFINED_TRUE,
    VAL_UNDEF: EvalOutcome.UNDEFINED,
}

_UNARY_OPCODES = {
    Not: OP_NOT,
    Next: OP_NEXT,
    Eventually: OP_EVENTUALLY,
    Globally: OP_GLOBALLY,
    Yesterday: OP_YESTERDAY,
    Once: OP_ONCE,
    Historically: OP_HISTORICALLY,
}

_BINARY_OPCODES = {
    And: OP_AND,
    Or: OP_OR,
    Implies: OP_IMPLIES,
    Equiv: OP_EQUIV,
    Until: OP_UNTIL,
    Since: OP_SINCE,
}


@dataclass(frozen=True)
class Program:
    ops: array
    arg0: array
    arg1: array
    ap_names: tuple[str, ...]

    @property
    def n_nodes(self) -> int:
        return len(self.ops)


def compile_formula(f: Formula) -> Program:
    ops = array("b")
    arg0 = array("i")
    arg1 = array("i")
    ap_slots: dict[str, int] = {}

    def emit(node: Formula) -> int:
        if isinstance(node, AtomicProp):
            slot = ap_slots.setdefault(node.name, len(ap_slots))
            ops.append(OP_AP)
            arg0.append(slot)
            arg1.append(-1)
        elif isinstance(node, LiteralTrue):
            ops.append(OP_TRUE)
            arg0.append(-1)
            arg1.append(-1)
        elif isinstance(node, LiteralFalse):
            ops.append(OP_FALSE)
            arg0.append(-1)
            arg1.append(-1)
        elif type(node) in _UNARY_OPCODES:
            child = emit(node.child)
            ops.append(_UNARY_OPCODES[type(node)])
            arg0.append(child)
            arg1.append(-1)
        elif type(node) in _BINARY_OPCODES:
            left = emit(node.left)
            right = emit(node.right)
            ops.append(_BINARY_OPCODES[type(node)])
            arg0.append(left)
            arg1.append(right)
        else:
            raise TypeError(f"not a formula node: {node!r}")
        return len(ops) - 1

    emit(f)
    return Program(ops, arg0, arg1, tuple(ap_slots))


def encode_trace(program: Program, trace: Trace) -> array:
    """Per-(atom slot, position) values for this program, flattened
    slot-major: entry a * len(trace) + i."""
    n_pos = len(trace)
    values = array("b", bytes([VAL_UNDEF]) * (len(program.ap_names) * n_pos))
    for a, name in enumerate(program.ap_names):
        base = a * n_pos
        for i, state in enumerate(trace):
            v = state.value_of(name)
            if v is not None:
                values[base + i] = VAL_TRUE if v else VAL_FALSE
    return values


def outcome_from_code(code: int) -> EvalOutcome:
    return _OUTCOME_BY_CODE[code]
