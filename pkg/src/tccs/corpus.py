"""The bundled example suite: every hand-checkable fact the tool rests on.

Each item is a named, self-contained check with its expectation frozen
in.  The suite doubles as the `paper-suite` CLI subcommand and as a
regression test; an item failure means the engine disagrees with a
fact that was established by hand, so it is always a bug.

Sources of expectations: direct readings of the transition rules and
commitment rules; hand-enumerated graphs for the small processes; the
separating pairs and predicate values worked out for the checkers,
including the pairs whose distinction needs timing, convergence
sensitivity, or divergence sensitivity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .analyses import facts_line
from .equiv import (
    CONV,
    CONV_DIV,
    MODES,
    USUAL,
    USUAL_UNTIMED,
    check,
    check_ccs_equivalently,
    explain,
    falsify_with_context,
    weak,
)
from .lts import build_lts, commitments, step, verify_lts_laws
from .parser import parse, parse_proc
from .terms import (
    classify,
    canonicalize,
    inp,
    out,
    pretty,
    pretty_context,
    substitute,
    Hole,
    Nil,
    Par,
    Prefix,
    Restrict,
)

__all__ = ["Item", "items", "run_suite"]


@dataclass(frozen=True)
class Item:
    """One check: a stable name and a thunk that raises on failure."""

    name: str
    run: Callable[[], None]


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise AssertionError(msg)


def _eq(got, want, what: str) -> None:
    _expect(got == want, "%s: got %r, want %r" % (what, got, want))


def _steps(src: str) -> set[tuple[str, str]]:
    p, defs = parse_proc(src)
    return {(str(lab), pretty(q)) for lab, q in step(p, defs)}


def _facts(src: str, extra: str = "") -> str:
    res = parse(extra + "Main = %s;" % src)
    lts = build_lts([res.process("Main")], res.defs)
    return facts_line(lts, lts.roots[0])


def _verdict(p_src: str, q_src: str, mode: str, extra: str = "") -> bool:
    res = parse(extra + "P = %s;\nQ = %s;" % (p_src, q_src))
    return check(res.process("P"), res.process("Q"), mode, res.defs).related


# ---------------------------------------------------------------------------
# item bodies


def _step_prefix() -> None:
    _eq(_steps("a.0"), {("a", "0"), ("tick", "a.0")}, "steps of a.0")


def _step_sync() -> None:
    got = _steps("a.0 | 'a.0")
    _eq(
        got,
        {("a", "'a.0"), ("'a", "a.0"), ("tau", "0")},
        "steps of a.0 | 'a.0",
    )
    _expect(
        all(lab != "tick" for lab, _ in got),
        "a.0 | 'a.0 must not tick while a tau step exists",
    )


def _step_else() -> None:
    _eq(
        _steps("{a.0} else b.0"),
        {("a", "0"), ("tick", "b.0")},
        "steps of {a.0} else b.0",
    )


def _step_restrict_sync() -> None:
    _eq(
        _steps("new a. (a.0 | 'a.0)"),
        {("tau", "0")},
        "steps of new a. (a.0 | 'a.0)",
    )


def _commit_nil() -> None:
    p, defs = parse_proc("0")
    _eq(commitments(p, defs), frozenset(), "commitments of 0")


def _commit_sum() -> None:
    p, defs = parse_proc("a.0 + 'b.0")
    _eq(
        commitments(p, defs),
        frozenset({inp("a"), out("b")}),
        "commitments of a.0 + 'b.0",
    )


def _commit_par_blocked() -> None:
    p, defs = parse_proc("a.0 | 'a.0")
    _eq(commitments(p, defs), None, "commitments of a.0 | 'a.0")
    _expect(
        any(lab.kind == "tau" for lab, _ in step(p, defs)),
        "the blocked composition must offer a tau step instead",
    )


def _graph_prefix() -> None:
    p, defs = parse_proc("a.0")
    lts = build_lts([p], defs, 100)
    _eq(len(lts), 2, "state count of a.0")
    got = {(pretty(lts.terms[i]), str(lab), pretty(lts.terms[j]))
           for i, lab, j in lts.edges()}
    _eq(
        got,
        {("a.0", "a", "0"), ("a.0", "tick", "a.0"), ("0", "tick", "0")},
        "edges of a.0",
    )


def _graph_diverging_call() -> None:
    p, defs = parse_proc("Omega")
    lts = build_lts([p], defs, 100)
    _eq(len(lts), 2, "state count of the diverging call")
    labs = [str(lab) for _, lab, _ in lts.edges()]
    _eq(sorted(labs), ["tau", "tau"], "the diverging call only unfolds")


def _graph_emitter() -> None:
    p, defs = parse_proc("emit(a)")
    lts = build_lts([p], defs, 100)
    _expect(len(lts) <= 3, "the emitter graph stays within 3 states")
    labs = {str(lab) for _, lab, _ in lts.edges()}
    _expect("'a" in labs, "the emitter offers its signal")
    _expect("tick" in labs, "the emitter lets the instant end")


def _laws_samples() -> None:
    for src in ("a.0", "{a.0} else b.0", "a.0 + D()", "emit(a) | Omega"):
        extra = "D() = tau.D();\n"
        res = parse(extra + "Main = %s;" % src)
        lts = build_lts([res.process("Main")], res.defs, 1000)
        _eq(verify_lts_laws(lts), [], "law report of %s" % src)


def _parse_tau_encoding() -> None:
    p, _ = parse_proc("tau.0")
    _eq(pretty(p), "new #1. (#1.0 | '#1.0)", "encoding of tau.0")


def _parse_emit_macro() -> None:
    p, defs = parse_proc("emit(a)")
    _eq(pretty(p), "emit(a)", "emit plugs in as a call")
    d = defs.lookup("emit")
    _eq(
        pretty(d.body),
        "{'a.emit(a)} else 0",
        "generated body of the emitter",
    )


def _parse_round_trip() -> None:
    for src in (
        "a.0 | 'a.0",
        "{a.0} else 0",
        "new a. (a.b.0 + 0)",
        "(a.0 (+) b.0)",
        "present a {emit(b)} else {0}",
    ):
        p, defs = parse_proc(src)
        back, _ = parse_proc(pretty(p), defs=defs)
        _eq(back, p, "round trip through pretty for %s" % src)


def _classify_samples() -> None:
    p, defs = parse_proc("a.0 + b.0")
    c = classify(p, defs)
    _eq((c.is_ccs, c.is_sl), (True, False), "class of a.0 + b.0")
    p, defs = parse_proc("emit(a) | present a {0} else {emit(b)}")
    c = classify(p, defs)
    _eq((c.is_ccs, c.is_sl), (False, True), "class of the signal pair")
    p, defs = parse_proc("Omega")
    c = classify(p, defs)
    _eq(c.is_ccs, True, "the diverging call stays tick-free")


def _substitute_samples() -> None:
    p = Prefix("in", "a", Nil())
    _eq(pretty(substitute(p, {"a": "b"})), "b.0", "direct renaming")
    q = Restrict("b", Prefix("in", "a", Prefix("out", "b", Nil())))
    r = substitute(q, {"a": "b"})
    _eq(
        pretty(r),
        "new #1. b.'#1.0",
        "renaming into a binder forces a fresh bound name",
    )


def _canonicalize_samples() -> None:
    p, _ = parse_proc("0 | a.0")
    _eq(pretty(canonicalize(p)), "a.0", "unit component dropped")
    p1, _ = parse_proc("a.0 | b.0")
    p2, _ = parse_proc("b.0 | a.0")
    _eq(canonicalize(p1), canonicalize(p2), "composition commutes")
    p, _ = parse_proc("new b. a.0")
    _eq(pretty(canonicalize(p)), "a.0", "dead restriction dropped")


def _facts_choice_with_diverging_peer() -> None:
    line = _facts("(a.0 + b.0) | 'a.Omega")
    for token in ("converge=false", "ctxconv=true", "diverge=true"):
        _expect(token in line, "%s missing from %r" % (token, line))


def _facts_diverge_and_converge() -> None:
    line = _facts("D()", extra="D() = tau.D() + tau.0;\n")
    for token in ("converge=true", "diverge=true"):
        _expect(token in line, "%s missing from %r" % (token, line))


def _facts_never_stable() -> None:
    line = _facts("a.0 | Omega")
    _expect("barbs={}" in line, "no barbs without a reachable settled state")


def _facts_reactivity() -> None:
    _expect("reactive=false" in _facts("a.Omega"), "divergence one step away")
    _expect("reactive=true" in _facts("a.0"), "finite process is reactive")


def _weak_samples() -> None:
    from .terms import TAU, TICK

    p, defs = parse_proc("tau.0")
    lts = build_lts([p], defs, 100)
    root = lts.roots[0]
    zero = lts.state_of(Nil())
    wtau = weak(lts, TAU)
    _expect((root, root) in wtau, "weak tau is reflexive")
    _expect((root, zero) in wtau, "weak tau crosses the encoded step")
    wtick = weak(lts, TICK)
    _expect((root, zero) in wtick, "weak tick settles first, then ticks")
    p, defs = parse_proc("tau.a.0")
    lts = build_lts([p], defs, 100)
    wa = weak(lts, inp("a"))
    _expect(
        (lts.roots[0], lts.state_of(Nil())) in wa,
        "weak label absorbs the leading internal step",
    )


def _equiv_par_omega() -> None:
    _eq(_verdict("a.0 | Omega", "Omega", CONV), True,
        "composition with a diverging peer, conv")
    _eq(_verdict("a.0 | Omega", "Omega", USUAL), False,
        "composition with a diverging peer, usual")


def _equiv_nil_vs_omega() -> None:
    _eq(_verdict("0", "Omega", CONV), False, "inert vs diverging, conv")
    _eq(_verdict("0", "Omega", USUAL_UNTIMED), True,
        "inert vs diverging, untimed")
    _eq(_verdict("0", "Omega", USUAL), False, "inert vs diverging, usual")


def _equiv_nil_vs_tau() -> None:
    _eq(_verdict("0", "tau.0", CONV), True, "inert vs one internal step")


def _equiv_else_guards() -> None:
    _eq(
        _verdict("{0} else b.0", "{tau.0} else b.0", CONV),
        False,
        "else_next separates guards that differ only by an internal step",
    )


def _equiv_nil_vs_unstable_choice() -> None:
    extra = "D() = tau.D() + tau.0;\n"
    _eq(_verdict("0", "D()", CONV, extra), True,
        "inert vs may-diverging choice, conv")
    _eq(_verdict("0", "D()", CONV_DIV, extra), False,
        "inert vs may-diverging choice, conv-div")


def _equiv_branching_under_parallel() -> None:
    q = "'a.(d.0 + Omega)"
    _eq(
        _verdict("a.(b.0 + c.0) | %s" % q, "(a.b.0 + a.c.0) | %s" % q, CONV),
        False,
        "branching point moved across a prefix, observed via a "
        "convergence-cutting peer",
    )


def _equiv_untimed_agreement() -> None:
    for p_src, q_src in (
        ("a.0 | Omega", "Omega"),
        ("0", "Omega"),
        ("a.(b.0 + c.0)", "a.b.0 + a.c.0"),
    ):
        res = parse("P = %s;\nQ = %s;" % (p_src, q_src))
        p, q = res.process("P"), res.process("Q")
        v1 = check(p, q, CONV, res.defs)
        v2 = check_ccs_equivalently(p, q, res.defs)
        _eq(
            v2.related,
            v1.related,
            "untimed decision for %s vs %s" % (p_src, q_src),
        )


def _equiv_deep_choice_pair() -> None:
    # Equal under classic untimed testing scenarios, yet separated by
    # every bisimulation mode implemented here; deciding testing-style
    # preorders is out of scope for this tool.
    p_src = "a.(b.0 + c.b.0) + a.(d.0 + c.d.0)"
    q_src = "a.(b.0 + c.d.0) + a.(d.0 + c.b.0)"
    for mode in MODES:
        _eq(
            _verdict(p_src, q_src, mode),
            False,
            "deep choice pair in mode %s" % mode,
        )


def _explain_renders() -> None:
    res = parse("P = 0;\nQ = Omega;")
    v = check(res.process("P"), res.process("Q"), CONV, res.defs)
    _expect(not v.related, "the pair is inequivalent")
    text = explain(v)
    _expect("tick" in text, "the separating challenge is the tick")


def _falsify_empty_context() -> None:
    res = parse("P = 0;\nQ = Omega;")
    hit = falsify_with_context(
        res.process("P"), res.process("Q"), res.defs, depth=0
    )
    _expect(hit is not None, "the empty context already separates")
    ctx, why = hit
    _expect(isinstance(ctx, Hole), "no wrapping needed")
    _expect("may-converge" in why, "separation is on may-convergence")


def _falsify_choice_tester() -> None:
    res = parse("P = a.(b.0 + c.0);\nQ = a.b.0 + a.c.0;")
    hit = falsify_with_context(
        res.process("P"), res.process("Q"), res.defs, depth=2
    )
    _expect(hit is not None, "a tester context separates the pair")
    ctx, _ = hit
    _expect(not isinstance(ctx, Hole), "the root alone cannot separate")


def _falsify_sound_on_related() -> None:
    res = parse("P = a.0;\nQ = a.0 + a.0;")
    hit = falsify_with_context(
        res.process("P"), res.process("Q"), res.defs, depth=2
    )
    _eq(hit, None, "no context separates a related pair")


def items() -> list[Item]:
    return [
        Item("step/prefix-and-tick", _step_prefix),
        Item("step/synchronization", _step_sync),
        Item("step/else-now-branch", _step_else),
        Item("step/restriction-hides-sync", _step_restrict_sync),
        Item("commit/nil", _commit_nil),
        Item("commit/sum-union", _commit_sum),
        Item("commit/blocked-composition", _commit_par_blocked),
        Item("graph/prefix", _graph_prefix),
        Item("graph/diverging-call", _graph_diverging_call),
        Item("graph/signal-emitter", _graph_emitter),
        Item("laws/samples", _laws_samples),
        Item("parse/internal-step-encoding", _parse_tau_encoding),
        Item("parse/signal-macro", _parse_emit_macro),
        Item("parse/round-trip", _parse_round_trip),
        Item("classify/samples", _classify_samples),
        Item("substitute/capture-avoidance", _substitute_samples),
        Item("canonical/unit-commute-dead", _canonicalize_samples),
        Item("facts/choice-with-diverging-peer",
             _facts_choice_with_diverging_peer),
        Item("facts/diverge-and-converge", _facts_diverge_and_converge),
        Item("facts/never-stable-no-barbs", _facts_never_stable),
        Item("facts/reactivity", _facts_reactivity),
        Item("weak/closures", _weak_samples),
        Item("equiv/diverging-peer-absorbed", _equiv_par_omega),
        Item("equiv/inert-vs-diverging", _equiv_nil_vs_omega),
        Item("equiv/inert-vs-internal-step", _equiv_nil_vs_tau),
        Item("equiv/else-separates-guards", _equiv_else_guards),
        Item("equiv/divergence-sensitivity", _equiv_nil_vs_unstable_choice),
        Item("equiv/branching-under-parallel",
             _equiv_branching_under_parallel),
        Item("equiv/untimed-agreement", _equiv_untimed_agreement),
        Item("equiv/deep-choice-pair", _equiv_deep_choice_pair),
        Item("explain/tick-challenge", _explain_renders),
        Item("falsify/empty-context", _falsify_empty_context),
        Item("falsify/choice-tester", _falsify_choice_tester),
        Item("falsify/sound-on-related", _falsify_sound_on_related),
    ]


def run_suite() -> list[tuple[str, bool, str]]:
    """Run every item; return (name, passed, message) per item."""
    report = []
    for item in items():
        try:
            item.run()
        except AssertionError as exc:
            report.append((item.name, False, str(exc)))
        except Exception as exc:  # pragma: no cover - engine bug surface
            report.append((item.name, False, "%s: %s" % (type(exc).__name__, exc)))
        else:
            report.append((item.name, True, ""))
    return report
