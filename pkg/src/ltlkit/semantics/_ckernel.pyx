# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernel; mirrors _pykernel exactly.

Same postorder table fill, same strict undefined propagation, and the
same in-order scans, so both backends return identical codes for every
(program, trace, position) triple.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc

BACKEND_NAME = "c"

DEF OP_AP = 0
DEF OP_TRUE = 1
DEF OP_FALSE = 2
DEF OP_NOT = 3
DEF OP_AND = 4
DEF OP_OR = 5
DEF OP_IMPLIES = 6
DEF OP_EQUIV = 7
DEF OP_NEXT = 8
DEF OP_EVENTUALLY = 9
DEF OP_GLOBALLY = 10
DEF OP_UNTIL = 11
DEF OP_YESTERDAY = 12
DEF OP_ONCE = 13
DEF OP_HISTORICALLY = 14
DEF OP_SINCE = 15

DEF VAL_FALSE = 0
DEF VAL_TRUE = 1
DEF VAL_UNDEF = 2


def eval_program(const signed char[:] ops, const int[:] arg0, const int[:] arg1,
                 const signed char[:] ap_values, int n_pos, int pos):
    cdef int n_nodes = ops.shape[0]
    cdef signed char *table
    cdef signed char *row
    cdef signed char *left
    cdef signed char *right
    cdef signed char v, lv, rv, out
    cdef int node, op, base, i, j, k, witness, result

    if pos < 0 or pos >= n_pos:
        return VAL_UNDEF

    table = <signed char *> PyMem_Malloc(n_nodes * n_pos)
    if table == NULL:
        raise MemoryError()

    try:
        for node in range(n_nodes):
            op = ops[node]
            row = table + node * n_pos
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
                left = table + arg0[node] * n_pos
                for i in range(n_pos):
                    v = left[i]
                    row[i] = v if v == VAL_UNDEF else 1 - v
            elif op == OP_AND or op == OP_OR or op == OP_IMPLIES or op == OP_EQUIV:
                left = table + arg0[node] * n_pos
                right = table + arg1[node] * n_pos
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
                left = table + arg0[node] * n_pos
                for i in range(n_pos):
                    row[i] = left[i + 1] if i + 1 < n_pos else VAL_UNDEF
            elif op == OP_YESTERDAY:
                left = table + arg0[node] * n_pos
                for i in range(n_pos):
                    row[i] = left[i - 1] if i >= 1 else VAL_FALSE
            elif op == OP_EVENTUALLY:
                left = table + arg0[node] * n_pos
                for i in range(n_pos):
                    out = VAL_FALSE
                    for k in range(i, n_pos):
                        v = left[k]
                        if v == VAL_UNDEF:
                            out = VAL_UNDEF
                            break
                        if v == VAL_TRUE:
                            out = VAL_TRUE
                            break
                    row[i] = out
            elif op == OP_GLOBALLY:
                left = table + arg0[node] * n_pos
                for i in range(n_pos):
                    out = VAL_TRUE
                    for k in range(i, n_pos):
                        v = left[k]
                        if v == VAL_UNDEF:
                            out = VAL_UNDEF
                            break
                        if v == VAL_FALSE:
                            out = VAL_FALSE
                            break
                    row[i] = out
            elif op == OP_ONCE:
                left = table + arg0[node] * n_pos
                for i in range(n_pos):
                    out = VAL_FALSE
                    for k in range(0, i + 1):
                        v = left[k]
                        if v == VAL_UNDEF:
                            out = VAL_UNDEF
                            break
                        if v == VAL_TRUE:
                            out = VAL_TRUE
                            break
                    row[i] = out
            elif op == OP_HISTORICALLY:
                left = table + arg0[node] * n_pos
                for i in range(n_pos):
                    out = VAL_TRUE
                    for k in range(0, i + 1):
                        v = left[k]
                        if v == VAL_UNDEF:
                            out = VAL_UNDEF
                            break
                        if v == VAL_FALSE:
                            out = VAL_FALSE
                            break
                    row[i] = out
            elif op == OP_UNTIL:
                left = table + arg0[node] * n_pos
                right = table + arg1[node] * n_pos
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
                left = table + arg0[node] * n_pos
                right = table + arg1[node] * n_pos
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

        result = table[(n_nodes - 1) * n_pos + pos]
    finally:
        PyMem_Free(table)
    return result
