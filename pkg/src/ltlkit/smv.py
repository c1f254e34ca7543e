"""Optional export adapter: render oracle queries as model-checker input.

The emitted document is a single self-contained module:

    MODULE main
    VAR
      step : 0..N;
    ASSIGN
      init(step) := 0;
      next(step) := case
        step < N : step + 1;
        TRUE : N;
      esac;
    FROZENVAR                 -- equivalence/entailment only
      <ap>_s<i> : boolean;    -- one free frozen boolean per AP per step
    DEFINE                    -- one definition per AP, selected by step
      <ap> := case
        step = 0 : <value at step 0>;
        ...
        TRUE : <value at step N>;
      esac;
    LTLSPEC <query>

The step counter walks 0..N once and then stutters in step N, so the
bounded prefix is the first N+1 positions of every path.  For
trace_check the per-step values are TRUE/FALSE constants frozen from the
given trace and the query is the formula itself; for equivalence the
query is ``<f> <-> <g>`` and for entailment ``<f> -> <g>``, with both
operands printed fully parenthesized.

Nothing in the test suite runs an external checker; this adapter only
renders the document.
"""

from __future__ import annotations

from .errors import UnsupportedFeatureError
from .formulas import Formula, collect_aps
from .oracle import OracleConfig
from .printer import print_ltl, print_ltl_bare
from .traces import Trace

QUERY_KINDS = ("equivalence", "entailment", "trace_check")

# identifiers that would collide with the generated module or the
# checker's reserved words
_RESERVED_SMV = frozenset({
    "step", "main", "self", "boolean", "word", "array", "of", "in",
    "case", "esac", "init", "next", "union", "xor", "xnor", "mod",
    "process", "MODULE", "VAR", "FROZENVAR", "ASSIGN", "DEFINE", "INIT",
    "TRANS", "INVAR", "SPEC", "LTLSPEC", "CTLSPEC", "FAIRNESS", "TRUE",
    "FALSE", "MIN", "MAX",
})


def _check_ap_names(names) -> None:
    for name in names:
        if name in _RESERVED_SMV:
            raise UnsupportedFeatureError(
                f"proposition name {name!r} collides with a reserved word "
                "of the export format"
            )


def _counter_block(n_steps: int) -> list[str]:
    last = n_steps - 1
    return [
        "MODULE main",
        "VAR",
        f"  step : 0..{last};",
        "ASSIGN",
        "  init(step) := 0;",
        "  next(step) := case",
        f"    step < {last} : step + 1;",
        f"    TRUE : {last};",
        "  esac;",
    ]


def _define_block(name: str, values: list[str]) -> list[str]:
    lines = ["  " + name + " := case"]
    for i, value in enumerate(values[:-1]):
        lines.append(f"    step = {i} : {value};")
    lines.append(f"    TRUE : {values[-1]};")
    lines.append("  esac;")
    return lines


def export_checker_query(
    kind: str,
    f: Formula,
    g_or_trace: Formula | Trace | None = None,
    cfg: OracleConfig | None = None,
) -> str:
    """Render one query document; see the module docstring for the format.

    Raises UnsupportedFeatureError for inputs outside the documented
    subset: an empty trace, a trace state missing a proposition the
    formula needs, or proposition names colliding with reserved words.
    """
    cfg = cfg or OracleConfig()
    if kind not in QUERY_KINDS:
        raise ValueError(f"unknown query kind {kind!r}")

    if kind == "trace_check":
        if not isinstance(g_or_trace, Trace):
            raise TypeError("trace_check needs a Trace as the second argument")
        trace = g_or_trace
        if len(trace) == 0:
            raise UnsupportedFeatureError("cannot export an empty trace")
        aps = collect_aps(f)
        _check_ap_names(aps)
        lines = _counter_block(len(trace))
        if aps:
            lines.append("DEFINE")
            for name in aps:
                values = []
                for state in trace:
                    v = state.value_of(name)
                    if v is None:
                        raise UnsupportedFeatureError(
                            f"trace state does not assign proposition {name!r}"
                        )
                    values.append("TRUE" if v else "FALSE")
                lines.extend(_define_block(name, values))
        lines.append(f"LTLSPEC {print_ltl_bare(f)}")
        return "\n".join(lines) + "\n"

    if not isinstance(g_or_trace, Formula):
        raise TypeError(f"{kind} needs a second Formula")
    g = g_or_trace
    aps = collect_aps(f).union(collect_aps(g))
    _check_ap_names(aps)
    n_steps = cfg.max_trace_length
    lines = _counter_block(n_steps)
    if aps:
        lines.append("FROZENVAR")
        for name in aps:
            for i in range(n_steps):
                lines.append(f"  {name}_s{i} : boolean;")
        lines.append("DEFINE")
        for name in aps:
            values = [f"{name}_s{i}" for i in range(n_steps)]
            lines.extend(_define_block(name, values))
    connective = "<->" if kind == "equivalence" else "->"
    lines.append(f"LTLSPEC {print_ltl(f)} {connective} {print_ltl(g)}")
    return "\n".join(lines) + "\n"
