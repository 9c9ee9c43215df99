"""Workbench for timed CCS: terms, transition graphs, analyses, equivalences.

The useful entry points are re-exported here; each submodule carries the
details.
"""

from .analyses import (
    StateFacts,
    analysis,
    barbs,
    converged,
    ctx_converge,
    facts,
    facts_line,
    is_reactive,
    may_converge,
    may_diverge,
)
from .equiv import (
    CONV,
    CONV_DIV,
    MODES,
    USUAL,
    USUAL_UNTIMED,
    CertEntry,
    EquivVerdict,
    Relation,
    check,
    check_ccs_equivalently,
    check_states,
    explain,
    falsify_with_context,
    largest_bisimulation,
    weak,
)
from .lts import BoundExceeded, Lts, State, build_lts, commitments, step, verify_lts_laws
from .parser import ParseError, ParseResult, parse, parse_proc
from .terms import (
    TAU,
    TICK,
    Call,
    DefTable,
    Definition,
    ElseNext,
    Label,
    NameSupply,
    Nil,
    Par,
    Prefix,
    Process,
    Restrict,
    Sum,
    canonicalize,
    classify,
    ensure_builtins,
    inp,
    out,
    pretty,
    substitute,
)

__all__ = [
    "Process",
    "Nil",
    "Prefix",
    "Sum",
    "Par",
    "Restrict",
    "Call",
    "ElseNext",
    "Label",
    "TAU",
    "TICK",
    "inp",
    "out",
    "NameSupply",
    "Definition",
    "DefTable",
    "ensure_builtins",
    "pretty",
    "substitute",
    "canonicalize",
    "classify",
    "ParseError",
    "ParseResult",
    "parse",
    "parse_proc",
    "BoundExceeded",
    "State",
    "Lts",
    "step",
    "commitments",
    "build_lts",
    "verify_lts_laws",
    "StateFacts",
    "analysis",
    "facts",
    "facts_line",
    "converged",
    "may_converge",
    "ctx_converge",
    "may_diverge",
    "barbs",
    "is_reactive",
    "USUAL",
    "USUAL_UNTIMED",
    "CONV",
    "CONV_DIV",
    "MODES",
    "Relation",
    "CertEntry",
    "EquivVerdict",
    "weak",
    "largest_bisimulation",
    "check",
    "check_states",
    "check_ccs_equivalently",
    "explain",
    "falsify_with_context",
]
