"""Operational semantics: strong transitions, commitments, reachable graphs.

Within an instant a process performs communication and internal steps.
When, and only when, no internal step is possible, time passes: the
whole process takes a single deterministic tick.  The negative premise
behind that rule is realized by computing the instantaneous steps
first and deriving the tick successor structurally only when no tau
step exists; the side conditions on composition and else_next are
facts about the whole state, not about a single rule application.

Unfolding a call is itself a tau step, never a silent rewrite.  The
divergence analyses downstream depend on that: the process defined by
X() = tau.X() must take internal steps forever.

States of a built graph are canonical terms, so commutation of
branches, inert units and dead restrictions never blow up the state
count.  Construction is bounded; hitting the bound is reported in the
result, not raised, and downstream analyses refuse truncated graphs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    NIL,
    TAU,
    TICK,
    Call,
    DefTable,
    ElseNext,
    Label,
    Nil,
    Par,
    Prefix,
    Process,
    Restrict,
    Sum,
    canonicalize,
    classify,
    pretty,
    substitute,
)

__all__ = [
    "BoundExceeded",
    "step",
    "commitments",
    "State",
    "Lts",
    "build_lts",
    "verify_lts_laws",
    "to_json",
    "to_dot",
]


class BoundExceeded(Exception):
    """Raised by consumers that cannot work on a truncated graph."""


# ---------------------------------------------------------------------------
# strong transitions


def step(p: Process, defs: DefTable) -> list[tuple[Label, Process]]:
    """All strong transitions of p, targets canonicalized.

    The tick successor is present exactly when no tau step is, and is
    unique.  The result is deduplicated and deterministically ordered.
    """
    raw = _alpha(p, defs)
    if not any(lab.kind == "tau" for lab, _ in raw):
        raw.append((TICK, _tick(p)))
    out: dict[tuple[Label, Process], None] = {}
    for lab, q in raw:
        out.setdefault((lab, canonicalize(q)), None)
    return sorted(out, key=lambda e: (e[0].sort_key(), pretty(e[1])))


def _alpha(p: Process, defs: DefTable) -> list[tuple[Label, Process]]:
    """Instantaneous steps: communication, synchronization, unfolding."""
    match p:
        case Nil():
            return []
        case Prefix(pol, a, k):
            return [(Label(pol, a), k)]
        case Sum(l, r):
            return _alpha(l, defs) + _alpha(r, defs)
        case Par(l, r):
            ls = _alpha(l, defs)
            rs = _alpha(r, defs)
            steps = [(lab, Par(l2, r)) for lab, l2 in ls]
            steps += [(lab, Par(l, r2)) for lab, r2 in rs]
            for lab, l2 in ls:
                if not lab.is_comm:
                    continue
                co = lab.co()
                steps += [(TAU, Par(l2, r2)) for lab2, r2 in rs if lab2 == co]
            return steps
        case Restrict(a, b):
            return [
                (lab, Restrict(a, b2))
                for lab, b2 in _alpha(b, defs)
                if lab.name != a
            ]
        case Call(ident, args):
            d = defs.lookup(ident)
            return [(TAU, substitute(d.body, dict(zip(d.params, args))))]
        case ElseNext(now, _):
            return _alpha(now, defs)
    raise AssertionError("unreachable node %r" % p)


def _tick(p: Process) -> Process:
    """Tick successor, defined only for states without a tau step.

    Under that premise every branch of a sum or composition can let
    time pass itself, and a call can never occur here: its unfolding
    tau would have shown up at the top.
    """
    match p:
        case Nil() | Prefix(_, _, _):
            return p
        case Sum(l, r):
            return Sum(_tick(l), _tick(r))
        case Par(l, r):
            return Par(_tick(l), _tick(r))
        case Restrict(a, b):
            return Restrict(a, _tick(b))
        case ElseNext(_, later):
            return later
        case Call(_, _):
            raise AssertionError("a call is never stable: %r" % p)
    raise AssertionError("unreachable node %r" % p)


# ---------------------------------------------------------------------------
# commitments

# A stable process commits on the finite set of communications it
# offers.  The rules mirror the instantaneous transitions read off
# syntactically: a sum offers both sides, an else_next offers whatever
# its current branch offers, a restriction withholds its bound name,
# and a composition commits only when no synchronization is possible.
# A call has no rule: it always has the unfolding step.


def commitments(p: Process, defs: DefTable) -> frozenset[Label] | None:
    match p:
        case Nil():
            return frozenset()
        case Prefix(pol, a, _):
            return frozenset({Label(pol, a)})
        case Sum(l, r) | Par(l, r):
            cl = commitments(l, defs)
            if cl is None:
                return None
            cr = commitments(r, defs)
            if cr is None:
                return None
            if type(p) is Par and any(lab.co() in cr for lab in cl):
                return None
            return cl | cr
        case Restrict(a, b):
            cb = commitments(b, defs)
            if cb is None:
                return None
            return frozenset(lab for lab in cb if lab.name != a)
        case Call(_, _):
            return None
        case ElseNext(now, _):
            return commitments(now, defs)
    raise AssertionError("unreachable node %r" % p)


# ---------------------------------------------------------------------------
# reachable graphs


@dataclass(frozen=True)
class State:
    """A state of a built graph: its dense id and its canonical term."""

    id: int
    term: Process


class Lts:
    """Rooted transition graph over canonical states.

    `terms[i]` is the canonical term of state i, `succ[i]` its ordered
    outgoing edges.  `stable` and `commit` cache the per-state stance
    toward time: a state is stable when it has no tau edge, and the
    commitment set is present exactly on stable states.  `_analysis`
    and `_weak` are write-once caches filled by downstream modules.
    """

    __slots__ = (
        "defs",
        "roots",
        "terms",
        "index",
        "succ",
        "truncated",
        "stable",
        "commit",
        "_analysis",
        "_weak",
    )

    def __init__(
        self,
        defs: DefTable,
        roots: tuple[int, ...],
        terms: list[Process],
        index: dict[Process, int],
        succ: list[tuple[tuple[Label, int], ...]],
        truncated: bool,
    ) -> None:
        self.defs = defs
        self.roots = roots
        self.terms = terms
        self.index = index
        self.succ = succ
        self.truncated = truncated
        self.stable = [
            not any(lab.kind == "tau" for lab, _ in edges) for edges in succ
        ]
        self.commit = [commitments(t, defs) for t in terms]
        self._analysis = None
        self._weak = None

    def __len__(self) -> int:
        return len(self.terms)

    def edges(self) -> list[tuple[int, Label, int]]:
        return [
            (i, lab, j) for i, out in enumerate(self.succ) for lab, j in out
        ]

    def state_of(self, p: Process) -> int:
        return self.index[canonicalize(p)]

    def state(self, i: int) -> State:
        return State(i, self.terms[i])


def build_lts(
    roots: list[Process] | tuple[Process, ...],
    defs: DefTable,
    bound: int = 10000,
) -> Lts:
    """Breadth-first closure of the step relation from the given roots.

    Stops, marking the result truncated, as soon as interning one more
    state would push the count past `bound`.  Unexplored states keep an
    empty edge tuple; consumers must check the flag.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    terms: list[Process] = []
    index: dict[Process, int] = {}
    succ: list[tuple[tuple[Label, int], ...] | None] = []
    truncated = False

    def intern(p: Process) -> int | None:
        nonlocal truncated
        i = index.get(p)
        if i is not None:
            return i
        if len(terms) >= bound:
            truncated = True
            return None
        index[p] = i = len(terms)
        terms.append(p)
        succ.append(None)
        return i

    root_ids: list[int] = []
    for r in roots:
        i = intern(canonicalize(r))
        if i is None:
            break
        root_ids.append(i)

    frontier = 0
    while frontier < len(terms) and not truncated:
        i = frontier
        frontier += 1
        edges: list[tuple[Label, int]] = []
        for lab, q in step(terms[i], defs):
            j = intern(q)
            if j is None:
                break
            edges.append((lab, j))
        succ[i] = tuple(edges)

    filled = [e if e is not None else () for e in succ]
    return Lts(defs, tuple(root_ids), terms, index, filled, truncated)


# ---------------------------------------------------------------------------
# sanity laws


def verify_lts_laws(lts: Lts) -> list[str]:
    """Check the per-state laws of the semantics; return violations.

    For every state: it has a tick edge if and only if it has no tau
    edge; the tick successor is unique; a state restricted to the
    calculus without else_next ticks to itself; the commitment set is
    present exactly on stable states and then lists the offered
    communications.  A non-empty report means an engine bug.
    """
    if lts.truncated:
        raise BoundExceeded("laws are only meaningful on a complete graph")
    report: list[str] = []
    for i, term in enumerate(lts.terms):
        out = lts.succ[i]
        taus = [j for lab, j in out if lab.kind == "tau"]
        ticks = [j for lab, j in out if lab.kind == "tick"]
        if bool(ticks) == bool(taus):
            report.append(
                "state %d (%s): tick present=%s but tau present=%s"
                % (i, pretty(term), bool(ticks), bool(taus))
            )
        if len(ticks) > 1:
            report.append(
                "state %d (%s): %d tick successors" % (i, pretty(term), len(ticks))
            )
        if ticks and classify(term, lts.defs).is_ccs and ticks[0] != i:
            report.append(
                "state %d (%s): ticks to %d instead of itself"
                % (i, pretty(term), ticks[0])
            )
        com = lts.commit[i]
        if (com is not None) != lts.stable[i]:
            report.append(
                "state %d (%s): commitment %s but stable=%s"
                % (i, pretty(term), com, lts.stable[i])
            )
        if com is not None:
            offered = frozenset(lab for lab, _ in out if lab.is_comm)
            if com != offered:
                report.append(
                    "state %d (%s): commits {%s} but offers {%s}"
                    % (
                        i,
                        pretty(term),
                        ", ".join(sorted(map(str, com))),
                        ", ".join(sorted(map(str, offered))),
                    )
                )
    return report


# ---------------------------------------------------------------------------
# export


def to_json(lts: Lts) -> dict:
    states = []
    for i, term in enumerate(lts.terms):
        com = lts.commit[i]
        states.append(
            {
                "id": i,
                "term": pretty(term),
                "stable": lts.stable[i],
                "commit": sorted(map(str, com)) if com is not None else None,
            }
        )
    return {
        "states": states,
        "edges": [[i, str(lab), j] for i, lab, j in lts.edges()],
        "roots": list(lts.roots),
        "truncated": lts.truncated,
    }


def to_dot(lts: Lts) -> str:
    def esc(s: str) -> str:
        return s.replace("\\", "\\\\").replace('"', '\\"')

    lines = ["digraph lts {", "  rankdir=LR;", "  node [shape=box];"]
    for i, term in enumerate(lts.terms):
        extra = ", peripheries=2" if lts.stable[i] else ""
        lines.append('  %d [label="%d: %s"%s];' % (i, i, esc(pretty(term)), extra))
    for i, lab, j in lts.edges():
        lines.append('  %d -> %d [label="%s"];' % (i, j, esc(str(lab))))
    lines.append("}")
    return "\n".join(lines)
