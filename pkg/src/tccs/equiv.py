"""Weak bisimulation checkers, certificates, and a context falsifier.

Four relations are decided on a shared finite graph, all as greatest
fixed points of an elimination loop.  A challenge is always a strong
edge; a response is always a weak transition into the current
candidate relation.  The modes differ only in which edges challenge
and which responses are accepted:

* usual: every edge challenges, tick included, and must be answered by
  the weak transition with the same label.
* usual-untimed: as usual, but tick edges neither challenge nor
  respond.  Only meaningful for processes that never mention else_next.
* conv: internal steps and tick challenge unconditionally; a
  communication edge challenges only from a state that can reach a
  settled state by instantaneous steps (ctx_converge), and when its
  target cannot, the responder may answer with the label or with
  internal steps alone.
* conv-div: conv, after first discarding every pair whose two states
  disagree on may_diverge.  Divergence agreement is a property of the
  states, not of the candidate relation, so it is an initial filter
  rather than an elimination clause; filtered pairs are recorded in
  the certificate with a challenge-free entry.

The conv game decides the contextual equivalence it stands for on all
processes, and conv-div its divergence-sensitive refinement; the
checker works with the labelled characterizations throughout.

A verdict carries the full elimination trace: replaying the trace in
order re-eliminates exactly the recorded pairs, and `explain` renders
the trace rooted at the queried pair as an alternating game tree.

`falsify_with_context` is the contextual side of the story: a bounded
enumeration of static contexts over a fixed tester family.  It only
ever reports sound distinctions; exhausting the enumeration proves
nothing.  Besides disagreement on may-convergence (which coincides
with weak-tick availability at the root) and on root barbs, it
compares the families of ready sets of the settled states reachable by
internal steps; related processes must match those families exactly,
so any mismatch is a genuine distinction even when the root barb sets
coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analyses import _tau_sccs, analysis, may_converge
from .lts import BoundExceeded, Lts, State, build_lts
from .terms import (
    NIL,
    DefTable,
    HOLE,
    Label,
    NameSupply,
    OMEGA_IDENT,
    Call,
    ParWith,
    Prefix,
    Process,
    RestrictCtx,
    StaticContext,
    all_names,
    classify,
    ensure_builtins,
    internal_choice,
    plug,
    pretty,
    pretty_context,
)

__all__ = [
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
    "falsify_with_context",
    "explain",
]

USUAL = "usual"
USUAL_UNTIMED = "usual-untimed"
CONV = "conv"
CONV_DIV = "conv-div"
MODES = (USUAL, USUAL_UNTIMED, CONV, CONV_DIV)

# internal mode for the untimed decision on processes without else_next:
# the tick clause is replaced by a may-convergence filter
_CONV_CCS = "conv-ccs"


# ---------------------------------------------------------------------------
# weak transitions


def _tau_closure(lts: Lts) -> list[int]:
    """Per-state bitmask of states reachable by zero or more tau steps."""
    cache = lts._weak
    if cache is None:
        cache = lts._weak = {}
    masks = cache.get("=>tau")
    if masks is None:
        n = len(lts)
        tau_succ = [
            [j for lab, j in out if lab.kind == "tau"] for out in lts.succ
        ]
        comp, comps = _tau_sccs(n, tau_succ)
        comp_mask = [0] * len(comps)
        for c, members in enumerate(comps):
            m = 0
            for v in members:
                m |= 1 << v
            for v in members:
                for w in tau_succ[v]:
                    if comp[w] != c:
                        m |= comp_mask[comp[w]]
            comp_mask[c] = m
        masks = [comp_mask[comp[v]] for v in range(n)]
        cache["=>tau"] = masks
    return masks


def _weak_masks(lts: Lts, lab: Label) -> list[int]:
    """Per-state bitmask of weak successors under `lab`.

    For tau this is the reflexive-transitive closure; for any other
    label it is tau-closure, one strong step with the label, then
    tau-closure again.
    """
    if lab.kind == "tau":
        return _tau_closure(lts)
    cache = lts._weak
    if cache is None:
        cache = lts._weak = {}
    key = "=>" + str(lab)
    masks = cache.get(key)
    if masks is None:
        n = len(lts)
        tclo = _tau_closure(lts)
        pre = [0] * n
        for j, out in enumerate(lts.succ):
            for l2, k in out:
                if l2 == lab:
                    pre[j] |= tclo[k]
        masks = []
        for i in range(n):
            m = 0
            rest = tclo[i]
            while rest:
                low = rest & -rest
                rest ^= low
                m |= pre[low.bit_length() - 1]
            masks.append(m)
        cache[key] = masks
    return masks


def _bits(mask: int):
    while mask:
        low = mask & -mask
        mask ^= low
        yield low.bit_length() - 1


def weak(lts: Lts, label: Label) -> set[tuple[int, int]]:
    """The weak transition relation for one label, as state-id pairs."""
    if lts.truncated:
        raise BoundExceeded("weak transitions need the full graph")
    masks = _weak_masks(lts, label)
    return {(i, j) for i in range(len(lts)) for j in _bits(masks[i])}


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class CertEntry:
    """One eliminated pair: who challenged, how, and in which round.

    A challenge-free entry records a pair discarded by an initial
    filter (divergence agreement, or may-convergence agreement for the
    untimed variant); those carry round 0.
    """

    pair: tuple[int, int]
    clause: str
    challenge: tuple[int, Label, int] | None
    round: int

    def to_json(self) -> dict:
        ch = self.challenge
        return {
            "pair": list(self.pair),
            "clause": self.clause,
            "challenge": None if ch is None else [ch[0], str(ch[1]), ch[2]],
            "round": self.round,
        }


@dataclass
class EquivVerdict:
    related: bool
    mode: str
    roots: tuple[int, int]
    rounds: int
    certificate: list[CertEntry]
    tester: str | None = None
    lts: Lts | None = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "related": self.related,
            "mode": self.mode,
            "roots": list(self.roots),
            "rounds": self.rounds,
            "certificate": [e.to_json() for e in self.certificate],
            "tester": self.tester,
        }


@dataclass(frozen=True)
class Relation:
    """A symmetric relation on the states of one graph."""

    mode: str
    pairs: frozenset[tuple[int, int]]

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return pair in self.pairs


# ---------------------------------------------------------------------------
# the elimination loop


def _eliminate(
    lts: Lts, mode: str
) -> tuple[list[int], list[CertEntry], int]:
    """Greatest fixed point by deterministic elimination sweeps.

    Starts from the full (or filtered) symmetric relation and removes
    violated pairs, sweeping in state order until a sweep removes
    nothing.  The certificate lists removals in the exact order they
    happened, so a replay that processes entries first to last sees
    the same candidate relation the checker saw.
    """
    n = len(lts)
    full = (1 << n) - 1
    cert: list[CertEntry] = []

    if mode == CONV_DIV:
        div = analysis(lts).may_diverge
        rel = [0] * n
        for i in range(n):
            m = 0
            for j in range(n):
                if div[i] == div[j]:
                    m |= 1 << j
            rel[i] = m
        for i in range(n):
            for j in range(i + 1, n):
                if div[i] != div[j]:
                    cert.append(CertEntry((i, j), "diverge", None, 0))
    elif mode == _CONV_CCS:
        conv = analysis(lts).may_converge
        rel = [0] * n
        for i in range(n):
            m = 0
            for j in range(n):
                if conv[i] == conv[j]:
                    m |= 1 << j
            rel[i] = m
        for i in range(n):
            for j in range(i + 1, n):
                if conv[i] != conv[j]:
                    cert.append(CertEntry((i, j), "converge", None, 0))
    else:
        rel = [full] * n

    conv_game = mode in (CONV, CONV_DIV, _CONV_CCS)
    cc = analysis(lts).ctx_converge if conv_game else []
    tclo = _tau_closure(lts)

    def violation(s: int, t: int):
        """First unanswerable strong challenge of s against t, if any."""
        for lab, s2 in lts.succ[s]:
            kind = lab.kind
            if kind == "tau":
                clause = "red-tau" if conv_game else "usual-mu"
                resp = tclo[t]
            elif kind == "tick":
                if mode in (USUAL_UNTIMED, _CONV_CCS):
                    continue
                clause = "red-tick" if conv_game else "usual-mu"
                resp = _weak_masks(lts, lab)[t]
            elif conv_game:
                if not cc[s]:
                    continue
                clause = "lab"
                resp = _weak_masks(lts, lab)[t]
                if not cc[s2]:
                    resp |= tclo[t]
            else:
                clause = "usual-mu"
                resp = _weak_masks(lts, lab)[t]
            if not resp & rel[s2]:
                return clause, (s, lab, s2)
        return None

    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for s in range(n):
            todo = rel[s] & ~((1 << s) - 1)
            for t in _bits(todo):
                hit = violation(s, t)
                if hit is None and t != s:
                    back = violation(t, s)
                    if back is not None:
                        clause, edge = back
                        cert.append(CertEntry((t, s), clause, edge, rounds))
                        rel[s] &= ~(1 << t)
                        rel[t] &= ~(1 << s)
                        changed = True
                    continue
                if hit is not None:
                    clause, edge = hit
                    cert.append(CertEntry((s, t), clause, edge, rounds))
                    rel[s] &= ~(1 << t)
                    rel[t] &= ~(1 << s)
                    changed = True
    return rel, cert, rounds


def largest_bisimulation(lts: Lts, mode: str) -> Relation:
    """The greatest relation satisfying the mode's clauses, as pairs."""
    if lts.truncated:
        raise BoundExceeded("equivalence checking needs the full graph")
    rel, _, _ = _eliminate(lts, mode)
    pairs = frozenset(
        (i, j) for i in range(len(lts)) for j in _bits(rel[i])
    )
    return Relation(mode, pairs)


def check_states(
    lts: Lts, s: State | int, t: State | int, mode: str
) -> EquivVerdict:
    """Decide one state pair on a prebuilt graph."""
    if lts.truncated:
        raise BoundExceeded("equivalence checking needs the full graph")
    si = s.id if isinstance(s, State) else s
    ti = t.id if isinstance(t, State) else t
    rel, cert, rounds = _eliminate(lts, mode)
    related = bool(rel[si] >> ti & 1)
    return EquivVerdict(related, mode, (si, ti), rounds, cert, None, lts)


def check(
    p: Process,
    q: Process,
    mode: str,
    defs: DefTable | None = None,
    bound: int = 10000,
) -> EquivVerdict:
    """Build the joint graph of p and q and decide the given relation."""
    if mode not in MODES:
        raise ValueError("unknown mode %r" % mode)
    defs = defs if defs is not None else DefTable()
    if mode == USUAL_UNTIMED:
        for r in (p, q):
            if not classify(r, defs).is_ccs:
                raise ValueError(
                    "usual-untimed compares only processes without else_next"
                )
    lts = build_lts([p, q], defs, bound)
    if lts.truncated:
        raise BoundExceeded(
            "state bound %d exceeded while building the graph" % bound
        )
    return check_states(lts, lts.roots[0], lts.roots[1], mode)


def check_ccs_equivalently(
    p: Process,
    q: Process,
    defs: DefTable | None = None,
    bound: int = 10000,
) -> EquivVerdict:
    """Decide the conv relation on tick-free processes the untimed way.

    The tick clause is replaced by agreement on may-convergence, which
    on processes without else_next selects the same pairs; the checker
    must therefore always agree with mode conv on such inputs, and the
    test suite holds it to that.
    """
    defs = defs if defs is not None else DefTable()
    for r in (p, q):
        if not classify(r, defs).is_ccs:
            raise ValueError(
                "the untimed decision applies only to processes "
                "without else_next"
            )
    lts = build_lts([p, q], defs, bound)
    if lts.truncated:
        raise BoundExceeded(
            "state bound %d exceeded while building the graph" % bound
        )
    rel, cert, rounds = _eliminate(lts, _CONV_CCS)
    si, ti = lts.roots
    related = bool(rel[si] >> ti & 1)
    return EquivVerdict(related, _CONV_CCS, (si, ti), rounds, cert, None, lts)


# ---------------------------------------------------------------------------
# bounded context falsification


def _testers(p: Process, q: Process, supply: NameSupply) -> list[Process]:
    """The tester family over the free names of the compared processes.

    Per free name a, in both polarities: a bare co-prefix over 0, a
    co-prefix over the two-stage internal choice ((b (+) 0) (+) c)
    with machine-fresh b and c, and a co-prefix over the diverging
    call.  The choice testers separate branching that bare offers
    cannot; the diverging testers cut convergence selectively.
    """
    testers: list[Process] = []
    for a in sorted(p.free | q.free):
        for polarity in ("out", "in"):
            testers.append(Prefix(polarity, a, NIL))
            b = supply.fresh()
            c = supply.fresh()
            pick = internal_choice(
                internal_choice(Prefix("in", b, NIL), NIL, supply),
                Prefix("in", c, NIL),
                supply,
            )
            testers.append(Prefix(polarity, a, pick))
            testers.append(Prefix(polarity, a, Call(OMEGA_IDENT)))
    return testers


def _ready_families(
    lts: Lts, root: int
) -> frozenset[frozenset[Label]]:
    """Ready sets of the settled states tau-reachable from the root."""
    tclo = _tau_closure(lts)
    fams = set()
    for i in _bits(tclo[root]):
        if lts.stable[i]:
            commit = lts.commit[i]
            assert commit is not None
            fams.add(commit)
    return frozenset(fams)


def _label_set(labels) -> str:
    return "{%s}" % ",".join(
        str(lab) for lab in sorted(labels, key=Label.sort_key)
    )


def falsify_with_context(
    p: Process,
    q: Process,
    defs: DefTable | None = None,
    depth: int = 3,
    bound: int = 10000,
    skipped: list[str] | None = None,
) -> tuple[StaticContext, str] | None:
    """Search for a static context under which p and q visibly differ.

    Contexts are compositions, up to `depth` layers, of parallel
    testers and restrictions over the free names.  A context counts as
    distinguishing when the two plugged processes disagree on
    may-convergence (equivalently, on weak tick at the root), on root
    barbs, or on the families of ready sets of their settled
    tau-reachable states.  Any returned context is a sound witness of
    inequivalence; None means only that this enumeration found none.
    Contexts whose graphs exceed the bound are skipped (and reported
    through `skipped` when given), not treated as evidence.
    """
    defs = defs.copy() if defs is not None else DefTable()
    ensure_builtins(defs, omega=True)
    supply = NameSupply(avoid=all_names(p) | all_names(q))
    testers = _testers(p, q, supply)
    names = sorted(p.free | q.free)

    level: list[StaticContext] = [HOLE]
    seen = {pretty_context(HOLE)}
    for _ in range(depth + 1):
        for ctx in level:
            cp = plug(ctx, p)
            cq = plug(ctx, q)
            try:
                lts = build_lts([cp, cq], defs, bound)
            except BoundExceeded:
                lts = None
            if lts is None or lts.truncated:
                if skipped is not None:
                    skipped.append(pretty_context(ctx))
                continue
            r0, r1 = lts.roots
            c0 = may_converge(lts, r0)
            c1 = may_converge(lts, r1)
            if c0 != c1:
                return ctx, (
                    "may-converge disagrees: left=%s right=%s"
                    % (str(c0).lower(), str(c1).lower())
                )
            b0 = analysis(lts).barbs[r0]
            b1 = analysis(lts).barbs[r1]
            if b0 != b1:
                return ctx, "root barbs disagree: left=%s right=%s" % (
                    _label_set(b0),
                    _label_set(b1),
                )
            f0 = _ready_families(lts, r0)
            f1 = _ready_families(lts, r1)
            if f0 != f1:
                odd = sorted(
                    _label_set(fam) for fam in (f0 ^ f1)
                )
                return ctx, (
                    "settled ready sets disagree: unmatched %s"
                    % ", ".join(odd)
                )
        nxt: list[StaticContext] = []
        for ctx in level:
            for tester in testers:
                cand: StaticContext = ParWith(ctx, tester)
                text = pretty_context(cand)
                if text not in seen:
                    seen.add(text)
                    nxt.append(cand)
            for a in names:
                cand = RestrictCtx(a, ctx)
                text = pretty_context(cand)
                if text not in seen:
                    seen.add(text)
                    nxt.append(cand)
        level = nxt
    return None


# ---------------------------------------------------------------------------
# rendering a negative verdict


def explain(v: EquivVerdict, max_depth: int = 8) -> str:
    """The elimination of the queried pair, rendered as a game tree.

    Each node shows the violated clause and the challenging edge, then
    every weak response the responder had and why each fails, down to
    clauses with no response at all, filter entries, or the depth cap.
    """
    if v.related:
        raise ValueError("nothing to explain: the verdict is positive")
    lts = v.lts
    if lts is None:
        raise ValueError("verdict carries no graph to explain against")

    where: dict[tuple[int, int], int] = {}
    for idx, e in enumerate(v.certificate):
        where.setdefault(e.pair, idx)
        where.setdefault((e.pair[1], e.pair[0]), idx)

    lines: list[str] = []

    def term(i: int) -> str:
        return pretty(lts.terms[i])

    def render(idx: int, indent: int, depth: int) -> None:
        e = v.certificate[idx]
        pad = "  " * indent
        s, t = e.pair
        if e.challenge is None:
            facts = analysis(lts)
            if e.clause == "diverge":
                what = "may_diverge"
                fs, ft = facts.may_diverge[s], facts.may_diverge[t]
            else:
                what = "may_converge"
                fs, ft = facts.may_converge[s], facts.may_converge[t]
            lines.append(
                "%s[%s] %s: %s=%s but %s: %s=%s"
                % (pad, e.clause, term(s), what, str(fs).lower(),
                   term(t), what, str(ft).lower())
            )
            return
        src, lab, dst = e.challenge
        lines.append(
            "%s[%s] %s -%s-> %s, challenged against %s:"
            % (pad, e.clause, term(src), lab, term(dst), term(t))
        )
        resp = _weak_masks(lts, lab)[t]
        if e.clause == "lab" and not analysis(lts).ctx_converge[dst]:
            resp |= _tau_closure(lts)[t]
        options = list(_bits(resp))
        if not options:
            lines.append("%s  no weak %s response exists" % (pad, lab))
            return
        if depth >= max_depth:
            lines.append(
                "%s  %d response(s), all previously eliminated (depth cap)"
                % (pad, len(options))
            )
            return
        for t2 in options:
            sub = where.get((dst, t2))
            if sub is None or sub >= idx:
                # a response into a pair that was never in the initial
                # relation leaves no trace entry of its own
                lines.append(
                    "%s  response to %s fails: pair never admissible"
                    % (pad, term(t2))
                )
                continue
            lines.append("%s  response to %s fails:" % (pad, term(t2)))
            render(sub, indent + 2, depth + 1)

    root = where.get(v.roots)
    header = "%s and %s are not related (%s)" % (
        term(v.roots[0]),
        term(v.roots[1]),
        v.mode,
    )
    lines.append(header)
    if root is None:
        lines.append("  (the queried pair was eliminated outside the trace)")
    else:
        render(root, 1, 1)
    return "\n".join(lines)
