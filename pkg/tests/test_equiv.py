"""The four games: goldens, certificates, oracle agreement, falsifier."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import Oracle
from tccs import (
    BoundExceeded,
    build_lts,
    check,
    check_ccs_equivalently,
    check_states,
    explain,
    falsify_with_context,
    largest_bisimulation,
    parse,
    parse_proc,
    weak,
)
from tccs.equiv import CONV, CONV_DIV, MODES, USUAL, USUAL_UNTIMED
from tccs.generate import GenConfig, random_pair, related_pair
from tccs.terms import TAU, TICK, inp

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _pair(src_p: str, src_q: str):
    p, defs = parse_proc(src_p)
    q, defs = parse_proc(src_q, defs=defs)
    return p, q, defs


def _related(src_p, src_q, mode):
    p, q, defs = _pair(src_p, src_q)
    return check(p, q, mode, defs).related


# ---------------------------------------------------------------------------
# golden pairs


def test_absorption_of_a_diverging_peer():
    assert _related("a.0 | Omega", "Omega", CONV)
    assert not _related("a.0 | Omega", "Omega", USUAL)


def test_inert_versus_diverging():
    assert not _related("0", "Omega", CONV)
    assert not _related("0", "Omega", USUAL)
    assert _related("0", "Omega", USUAL_UNTIMED)


def test_inert_versus_one_internal_step():
    assert _related("0", "tau.0", CONV)
    assert not _related("{0} else b.0", "{tau.0} else b.0", CONV)


def test_divergence_sensitivity_splits_the_settling_loop():
    res = parse("D() = tau.D() + tau.0;\nP = D();\nZ = 0;\n")
    p, z = res.process("P"), res.process("Z")
    assert check(z, p, CONV, res.defs).related
    assert not check(z, p, CONV_DIV, res.defs).related


def test_branching_is_not_absorbed_under_composition():
    left = "(a.(b.0 + c.0)) | 'a.(d.0 + Omega)"
    right = "(a.b.0 + a.c.0) | 'a.(d.0 + Omega)"
    assert not _related(left, right, CONV)


# ---------------------------------------------------------------------------
# weak transitions


def test_weak_closures_on_one_internal_step():
    p, defs = parse_proc("tau.0")
    lts = build_lts([p], defs)
    root = lts.roots[0]
    zero = lts.state_of(parse_proc("0")[0])
    assert weak(lts, TAU) >= {(root, root), (root, zero), (zero, zero)}
    assert (root, zero) in weak(lts, TICK)
    q, qdefs = parse_proc("tau.a.0")
    lts2 = build_lts([q], qdefs)
    assert (
        lts2.roots[0],
        lts2.state_of(parse_proc("0")[0]),
    ) in weak(lts2, inp("a"))


def test_weak_refuses_truncated_graphs():
    p, defs = parse_proc("Omega | a.b.c.0")
    lts = build_lts([p], defs, bound=3)
    with pytest.raises(BoundExceeded):
        weak(lts, TAU)


# ---------------------------------------------------------------------------
# certificates


def _replay(verdict, lts, mode):
    """Walk the elimination trace and re-check every removal."""
    orc = Oracle(lts)
    n = len(lts)
    rel = {(s, t) for s in range(n) for t in range(n)}

    def respond(t, clause, lab, dst):
        if clause in ("red-tau",) or (clause == "usual-mu" and lab == TAU):
            resp = orc.tau_star[t]
        elif lab == TICK:
            resp = orc.weak(t, lab)
        elif clause == "lab":
            resp = set(orc.weak(t, lab))
            if not orc.ctx[dst]:
                resp = resp | orc.tau_star[t]
        else:
            resp = orc.weak(t, lab)
        return resp

    for entry in verdict.certificate:
        s, t = entry.pair
        assert (s, t) in rel, "entry for a pair already gone"
        if entry.challenge is None:
            assert entry.round == 0
            if entry.clause == "diverge":
                assert orc.div[s] != orc.div[t]
            else:
                assert entry.clause == "converge"
                assert orc.conv[s] != orc.conv[t]
        else:
            src, lab, dst = entry.challenge
            assert src == s
            assert (lab, dst) in [(l, j) for l, j in lts.succ[s]]
            if entry.clause == "lab":
                assert orc.ctx[s]
            resp = respond(t, entry.clause, lab, dst)
            assert not any((dst, u) in rel for u in resp), (
                "recorded challenge still has a response"
            )
            assert 1 <= entry.round <= verdict.rounds
        rel.discard((s, t))
        rel.discard((t, s))
    return rel


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_certificate_replays_for_every_mode(seed):
    rng = random.Random(seed)
    p, q, defs = random_pair(rng, GenConfig(depth=3, max_defs=2))
    for mode in (USUAL, CONV, CONV_DIV):
        try:
            verdict = check(p, q, mode, defs, bound=400)
        except BoundExceeded:
            return
        lts = verdict.lts
        survivors = _replay(verdict, lts, mode)
        roots = tuple(verdict.roots)
        assert verdict.related == (roots in survivors)
        if not verdict.related:
            assert any(
                set(e.pair) == set(roots) for e in verdict.certificate
            )


def test_identity_pairs_always_survive():
    p, q, defs = _pair("a.Omega + b.0", "{tau.0} else c.0")
    lts = build_lts([p, q], defs)
    for mode in MODES:
        rel = largest_bisimulation(lts, mode)
        for i in range(len(lts)):
            assert (i, i) in rel


def test_check_states_matches_check():
    p, q, defs = _pair("a.0 + b.0", "a.0")
    lts = build_lts([p, q], defs)
    v1 = check_states(lts, lts.roots[0], lts.roots[1], CONV)
    v2 = check(p, q, CONV, defs)
    assert v1.related == v2.related == False
    assert v1.certificate == v2.certificate


# ---------------------------------------------------------------------------
# agreement with the reference and among the modes


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_relations_agree_with_the_reference(seed):
    rng = random.Random(seed)
    p, q, defs = random_pair(rng, GenConfig(depth=3, max_defs=2))
    lts = build_lts([p, q], defs, bound=120)
    if lts.truncated:
        return
    orc = Oracle(lts)
    for mode in (USUAL, CONV, CONV_DIV):
        assert set(largest_bisimulation(lts, mode).pairs) == orc.gfp(mode)


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_mode_inclusions_on_random_graphs(seed):
    rng = random.Random(seed)
    p, q, defs = random_pair(rng, GenConfig(depth=3, max_defs=2))
    lts = build_lts([p, q], defs, bound=150)
    if lts.truncated:
        return
    usual = largest_bisimulation(lts, USUAL).pairs
    conv = largest_bisimulation(lts, CONV).pairs
    conv_div = largest_bisimulation(lts, CONV_DIV).pairs
    assert usual <= conv
    assert conv_div <= conv


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_untimed_decision_agrees_on_ccs(seed):
    rng = random.Random(seed)
    p, q, defs = random_pair(
        rng, GenConfig(depth=3, max_defs=2, allow_else=False)
    )
    try:
        va = check_ccs_equivalently(p, q, defs, bound=300)
        vc = check(p, q, CONV, defs, bound=300)
    except BoundExceeded:
        return
    assert va.related == vc.related
    assert va.mode == "conv-ccs"


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_related_pairs_are_related_in_every_mode(seed):
    rng = random.Random(seed)
    p, q, defs = related_pair(rng, GenConfig(depth=3, max_defs=2))
    for mode in (USUAL, CONV, CONV_DIV):
        try:
            assert check(p, q, mode, defs, bound=600).related
        except BoundExceeded:
            return


# ---------------------------------------------------------------------------
# falsifier


def test_empty_context_separates_inert_from_diverging():
    p, q, defs = _pair("0", "Omega")
    found = falsify_with_context(p, q, defs, depth=0)
    assert found is not None
    _, why = found
    assert "may-converge" in why


def test_a_tester_separates_external_from_internal_choice():
    p, q, defs = _pair("a.(b.0 + c.0)", "a.b.0 + a.c.0")
    found = falsify_with_context(p, q, defs, depth=1)
    assert found is not None
    _, why = found
    assert "disagree" in why
    assert not check(p, q, CONV, defs).related


def test_no_context_claimed_for_a_related_pair():
    p, q, defs = _pair("a.0 | Omega", "Omega")
    assert falsify_with_context(p, q, defs, depth=1) is None


def test_oversized_plugs_are_skipped_not_fatal():
    p, q, defs = _pair("a.b.c.d.0", "a.b.c.0")
    skipped = []
    found = falsify_with_context(p, q, defs, depth=1, bound=6, skipped=skipped)
    assert skipped, "a tiny bound must force skips"


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_falsifier_never_contradicts_the_checker(seed):
    rng = random.Random(seed)
    p, q, defs = random_pair(rng, GenConfig(depth=3, max_defs=1))
    try:
        found = falsify_with_context(p, q, defs, depth=1, bound=400)
    except BoundExceeded:
        return
    if found is not None:
        assert not check(p, q, CONV, defs, bound=2000).related


# ---------------------------------------------------------------------------
# explanations and error paths


def test_explain_tick_challenge():
    p, q, defs = _pair("0", "Omega")
    text = explain(check(p, q, CONV, defs))
    assert "not related (conv)" in text
    assert "[red-tick]" in text
    assert "no weak tick response exists" in text


def test_explain_divergence_filter():
    res = parse("D() = tau.D() + tau.0;\nP = D();\nZ = 0;\n")
    verdict = check(res.process("Z"), res.process("P"), CONV_DIV, res.defs)
    text = explain(verdict)
    assert "[diverge]" in text and "may_diverge" in text


def test_explain_refuses_related_verdicts():
    p, q, defs = _pair("0", "0")
    with pytest.raises(ValueError):
        explain(check(p, q, CONV, defs))


def test_unknown_mode_and_untimed_input_guard():
    p, q, defs = _pair("0", "{0} else 0")
    with pytest.raises(ValueError):
        check(p, q, "strong", defs)
    with pytest.raises(ValueError):
        check(p, q, USUAL_UNTIMED, defs)
    with pytest.raises(ValueError):
        check_ccs_equivalently(p, q, defs)


def test_state_bound_is_reported():
    p, q, defs = _pair("Omega | a.b.0", "0")
    with pytest.raises(BoundExceeded):
        check(p, q, CONV, defs, bound=3)
