"""Pure-Python evaluation kernel.

Fills a (node, position) table bottom-up over the postorder program.
Every entry holds exactly the value the recursive definition assigns to
that subformula at that position, including the strict (non-Kleene)
treatment of undefined operands and the in-order scans of the temporal
operators, so the first undefined value met during a scan wins.
"""

from __future__ import annotations

from array import array

from .program import (
    OP_AND,
    OP_AP,
    OP_EQUIV,
    OP_EVENTUALLY,
    OP_FALSE,
    OP_GLOBALLY,
    OP_HISTORICALLY,
    OP_IMPLIES,
    OP_NEXT,
    OP_NOT,
    OP_ONCE,
    OP_OR,
    OP_SINCE,
    OP_TRUE,
    OP_UNTIL,
    OP_YESTERDAY,
    VAL_FALSE,
    VAL_TRUE,
    VAL_UNDEF,
)

BACKEND_NAME = "python"


def eval_program(ops, arg0, arg1, ap_values, n_pos: int, pos: int) -> int:
    if pos < 0 or pos >= n_pos:
        return VAL_UNDEF
    n_nodes = len(ops)
    table = [array("b", bytes(n_pos)) for _ in range(n_nodes)]

    for node in range(n_nodes):
        op = ops[node]
        row = table[node]
        if op == OP_AP:
            base = arg0[node] * n_pos
            for i in range(n_pos):
                row[i] = ap_values[base + i]
        elif op == OP_TRUE:
            for i in range(n_pos):
                row[i] = VAL_TRUE
        elif op == OP_FALSE:
            for i in range(n_pos):
                row[i] = VAL_FALSE
        elif op == OP_NOT:
            child = table[arg0[node]]
            for i in range(n_pos):
                v = child[i]
                row[i] = v if v == VAL_UNDEF else 1 - v
        elif op in (OP_AND, OP_OR, OP_IMPLIES, OP_EQUIV):
            left = table[arg0[node]]
            right = table[arg1[node]]
            for i in range(n_pos):
                lv = left[i]
                rv = right[i]
                if lv == VAL_UNDEF or rv == VAL_UNDEF:
                    row[i] = VAL_UNDEF
                elif op == OP_AND:
                    row[i] = lv & rv
                elif op == OP_OR:
                    row[i] = lv | rv
                elif op == OP_IMPLIES:
                    row[i] = (1 - lv) | rv
                else:
                    row[i] = VAL_TRUE if lv == rv else VAL_FALSE
        elif op == OP_NEXT:
            child = table[arg0[node]]
            for i in range(n_pos):
                row[i] = child[i + 1] if i + 1 < n_pos else VAL_UNDEF
        elif op == OP_YESTERDAY:
            child = table[arg0[node]]
            for i in range(n_pos):
                row[i] = child[i - 1] if i >= 1 else VAL_FALSE
        elif op == OP_EVENTUALLY:
            child = table[arg0[node]]
            for i in range(n_pos):
                out = VAL_FALSE
                for k in range(i, n_pos):
                    v = child[k]
                    if v == VAL_UNDEF:
                        out = VAL_UNDEF
                        break
                    if v == VAL_TRUE:
                        out = VAL_TRUE
                        break
                row[i] = out
        elif op == OP_GLOBALLY:
            child = table[arg0[node]]
            for i in range(n_pos):
                out = VAL_TRUE
                for k in range(i, n_pos):
                    v = child[k]
                    if v == VAL_UNDEF:
                        out = VAL_UNDEF
                        break
                    if v == VAL_FALSE:
                        out = VAL_FALSE
                        break
                row[i] = out
        elif op == OP_ONCE:
            child = table[arg0[node]]
            for i in range(n_pos):
                out = VAL_FALSE
                for k in range(0, i + 1):
                    v = child[k]
                    if v == VAL_UNDEF:
                        out = VAL_UNDEF
                        break
                    if v == VAL_TRUE:
                        out = VAL_TRUE
                        break
                row[i] = out
        elif op == OP_HISTORICALLY:
            child = table[arg0[node]]
            for i in range(n_pos):
                out = VAL_TRUE
                for k in range(0, i + 1):
                    v = child[k]
                    if v == VAL_UNDEF:
                        out = VAL_UNDEF
                        break
                    if v == VAL_FALSE:
                        out = VAL_FALSE
                        break
                row[i] = out
        elif op == OP_UNTIL:
            left = table[arg0[node]]
            right = table[arg1[node]]
            for i in range(n_pos):
                out = VAL_FALSE
                witness = -1
                for k in range(i, n_pos):
                    v = right[k]
                    if v == VAL_UNDEF:
                        out = VAL_UNDEF
                        break
                    if v == VAL_TRUE:
                        witness = k
                        break
                if out != VAL_UNDEF and witness >= 0:
                    out = VAL_TRUE
                    for j in range(i, witness):
                        v = left[j]
                        if v == VAL_UNDEF:
                            out = VAL_UNDEF
                            break
                        if v == VAL_FALSE:
                            out = VAL_FALSE
                            break
                row[i] = out
        elif op == OP_SINCE:
            left = table[arg0[node]]
            right = table[arg1[node]]
            for i in range(n_pos):
                out = VAL_FALSE
                witness = -1
                for k in range(i, -1, -1):
                    v = right[k]
                    if v == VAL_UNDEF:
                        out = VAL_UNDEF
                        break
                    if v == VAL_TRUE:
                        witness = k
                        break
                if out != VAL_UNDEF and witness >= 0:
                    out = VAL_TRUE
                    for j in range(witness + 1, i + 1):
                        v = left[j]
                        if v == VAL_UNDEF:
                            out = VAL_UNDEF
                            break
                        if v == VAL_FALSE:
                            out = VAL_FALSE
                            break
                row[i] = out
        else:
            raise ValueError(f"unknown opcode {op}")

    return table[n_nodes - 1][pos]
