"""Syntax-level laws: printing, canonical forms, renaming, classification."""

import random

from hypothesis import given, settings, strategies as st

from tccs import (
    DefTable,
    NameSupply,
    canonicalize,
    classify,
    parse_proc,
    pretty,
    substitute,
)
from tccs.generate import GenConfig, random_ccs_term, random_sl_program, random_term
from tccs.lts import step
from tccs.terms import NIL, Par, Prefix, Restrict, Sum, all_names, internal_choice, make_tau

CFG = GenConfig(depth=4, max_defs=2)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_pretty_parse_round_trip(seed):
    p, defs = random_term(random.Random(seed), CFG)
    q, _ = parse_proc(pretty(p), defs=defs)
    assert q == p


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_pretty_is_stable_after_reparse(seed):
    p, defs = random_term(random.Random(seed), CFG)
    text = pretty(p)
    q, _ = parse_proc(text, defs=defs)
    assert pretty(q) == text


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_canonicalize_idempotent(seed):
    p, _ = random_term(random.Random(seed), CFG)
    c = canonicalize(p)
    assert canonicalize(c) == c


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_canonicalize_preserves_strong_steps(seed):
    p, defs = random_term(random.Random(seed), CFG)
    want = {(lab, canonicalize(t)) for lab, t in step(p, defs)}
    got = {(lab, canonicalize(t)) for lab, t in step(canonicalize(p), defs)}
    assert got == want


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_substitute_identity_and_free_names(seed):
    p, _ = random_term(random.Random(seed), CFG)
    assert substitute(p, {n: n for n in p.free}) == p
    mapping = {n: n + n for n in p.free}
    assert substitute(p, mapping).free == frozenset(
        mapping.get(n, n) for n in p.free
    )


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_substitute_swap_is_an_involution_up_to_canonical_form(seed):
    p, _ = random_term(random.Random(seed), CFG)
    swap = {"a": "b", "b": "a"}
    back = substitute(substitute(p, swap), swap)
    assert canonicalize(back) == canonicalize(p)


def test_substitute_avoids_capture():
    # renaming b to a must not let the binder a capture it
    p = Restrict("a", Prefix("in", "b", Prefix("out", "a", NIL)))
    q = substitute(p, {"b": "a"})
    assert q.name != "a"
    assert q.body == Prefix("in", "a", Prefix("out", q.name, NIL))


def test_canonical_forms_commute_drop_units_and_dead_binders():
    a, b = Prefix("in", "a", NIL), Prefix("in", "b", NIL)
    assert canonicalize(Sum(b, a)) == canonicalize(Sum(a, b))
    assert canonicalize(Par(b, Par(a, NIL))) == canonicalize(Par(a, b))
    assert canonicalize(Par(NIL, NIL)) == NIL
    assert canonicalize(Restrict("c", Par(a, b))) == canonicalize(Par(a, b))
    assert canonicalize(Restrict("a", a)) == Restrict("#1", Prefix("in", "#1", NIL))


def test_name_supply_skips_avoided_and_never_repeats():
    supply = NameSupply(avoid={"#1", "#3"})
    drawn = [supply.fresh() for _ in range(4)]
    assert drawn == ["#2", "#4", "#5", "#6"]


def test_make_tau_rejects_a_name_free_in_the_continuation():
    import pytest

    with pytest.raises(ValueError):
        make_tau(Prefix("in", "a", NIL), "a")


def test_internal_choice_offers_both_branches_internally():
    a, b = Prefix("in", "a", NIL), Prefix("in", "b", NIL)
    p = internal_choice(a, b, NameSupply(avoid=all_names(Sum(a, b))))
    moves = {(lab.kind, canonicalize(t)) for lab, t in step(p, DefTable())}
    assert moves == {("tau", a), ("tau", b)}


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_classify_matches_the_generators(seed):
    rng = random.Random(seed)
    p, defs = random_ccs_term(rng, CFG)
    assert classify(p, defs).is_ccs
    q, qdefs = random_sl_program(rng, CFG)
    assert classify(q, qdefs).is_sl
