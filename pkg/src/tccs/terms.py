"""Abstract syntax of timed CCS.

A process is an immutable tree built from seven constructors:
inaction, communication prefix, sum, parallel composition, name
restriction, identifier call, and else_next (run the first operand
in the current instant, switch to the second when time passes).

Two name spaces coexist.  User names match [a-z][a-zA-Z0-9_]* and
come from source text; machine names are rendered #1, #2, ... and
are produced by a NameSupply for derived forms and for capture
avoidance.  The two can never collide.  Names are plain interned
strings, so equality of names is string equality.

Every node precomputes its hash and its free-name set, which keeps
state interning and capture checks cheap when the transition engine
explores large graphs.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "KEYWORDS",
    "Label",
    "TAU",
    "TICK",
    "inp",
    "out",
    "Process",
    "Nil",
    "NIL",
    "Prefix",
    "Sum",
    "Par",
    "Restrict",
    "Call",
    "ElseNext",
    "DefTable",
    "Definition",
    "NameSupply",
    "is_machine_name",
    "all_names",
    "substitute",
    "canonicalize",
    "pretty",
    "classify",
    "Classification",
    "StaticContext",
    "Hole",
    "HOLE",
    "ParWith",
    "RestrictCtx",
    "plug",
    "pretty_context",
    "OMEGA_IDENT",
    "EMIT_IDENT",
    "omega_definition",
    "emit_definition",
    "make_tau",
    "make_tick",
    "internal_choice",
]

KEYWORDS = frozenset({"new", "else", "tau", "tick", "emit", "present", "Omega"})


def is_machine_name(name: str) -> bool:
    return name.startswith("#")


class NameSupply:
    """Deterministic source of fresh machine names #1, #2, ...

    Indices listed in `avoid` (as rendered machine names) are skipped,
    so a supply seeded with every machine name in sight never captures
    or collides.  One supply is confined to one parse or rewrite
    session; sharing across sessions would leak state.
    """

    __slots__ = ("_next", "_avoid")

    def __init__(self, avoid: object = ()) -> None:
        self._avoid = {n for n in avoid if isinstance(n, str) and n.startswith("#")}
        self._next = 1

    def fresh(self) -> str:
        while True:
            cand = "#%d" % self._next
            self._next += 1
            if cand not in self._avoid:
                return cand


# ---------------------------------------------------------------------------
# labels


class Label:
    """A transition label: input a, output 'a, tau, or tick.

    Inputs and outputs are the communication labels; together with tau
    they are the labels of actions that happen within an instant, and
    tick marks the passage to the next instant.
    """

    __slots__ = ("kind", "name", "_hash")
    __match_args__ = ("kind", "name")

    def __init__(self, kind: str, name: str | None = None) -> None:
        if kind in ("in", "out"):
            if name is None:
                raise ValueError("communication label needs a name")
        elif kind in ("tau", "tick"):
            if name is not None:
                raise ValueError("%s carries no name" % kind)
        else:
            raise ValueError("bad label kind %r" % kind)
        self.kind = kind
        self.name = name
        self._hash = hash((kind, name))

    @property
    def is_comm(self) -> bool:
        return self.kind in ("in", "out")

    @property
    def is_alpha(self) -> bool:
        return self.kind != "tick"

    def co(self) -> "Label":
        """The matching label of the opposite polarity."""
        if self.kind == "in":
            return Label("out", self.name)
        if self.kind == "out":
            return Label("in", self.name)
        raise ValueError("%s has no co-label" % self.kind)

    def sort_key(self) -> tuple[int, str]:
        rank = {"in": 0, "out": 1, "tau": 2, "tick": 3}[self.kind]
        return (rank, self.name or "")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Label)
            and self.kind == other.kind
            and self.name == other.name
        )

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if self.kind == "in":
            return self.name  # type: ignore[return-value]
        if self.kind == "out":
            return "'" + self.name  # type: ignore[operator]
        return self.kind

    def __repr__(self) -> str:
        return "Label(%s)" % self


TAU = Label("tau")
TICK = Label("tick")


def inp(name: str) -> Label:
    return Label("in", name)


def out(name: str) -> Label:
    return Label("out", name)


def parse_label(text: str) -> Label:
    if text == "tau":
        return TAU
    if text == "tick":
        return TICK
    if text.startswith("'"):
        return Label("out", text[1:])
    return Label("in", text)


# ---------------------------------------------------------------------------
# processes


class Process:
    """Base of all process nodes.

    Subclasses fill in `free` (the free name set) and `_hash` during
    construction.  Equality is structural; bound names are compared
    literally, so alpha-variants are distinct terms until canonicalize
    renames their binders into the machine name space.
    """

    __slots__ = ("free", "_hash")

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return pretty(self)


class Nil(Process):
    __slots__ = ()
    __match_args__ = ()

    def __init__(self) -> None:
        self.free = frozenset()
        self._hash = hash(("Nil",))

    __hash__ = Process.__hash__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Nil)


NIL = Nil()


class Prefix(Process):
    __slots__ = ("polarity", "name", "cont")
    __match_args__ = ("polarity", "name", "cont")

    def __init__(self, polarity: str, name: str, cont: Process) -> None:
        if polarity not in ("in", "out"):
            raise ValueError("bad polarity %r" % polarity)
        self.polarity = polarity
        self.name = name
        self.cont = cont
        self.free = cont.free | {name}
        self._hash = hash(("Prefix", polarity, name, cont._hash))

    @property
    def label(self) -> Label:
        return Label(self.polarity, self.name)

    __hash__ = Process.__hash__

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is Prefix
            and self._hash == other._hash
            and self.polarity == other.polarity
            and self.name == other.name
            and self.cont == other.cont
        )


class Sum(Process):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __init__(self, left: Process, right: Process) -> None:
        self.left = left
        self.right = right
        self.free = left.free | right.free
        self._hash = hash(("Sum", left._hash, right._hash))

    __hash__ = Process.__hash__

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is Sum
            and self._hash == other._hash
            and self.left == other.left
            and self.right == other.right
        )


class Par(Process):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __init__(self, left: Process, right: Process) -> None:
        self.left = left
        self.right = right
        self.free = left.free | right.free
        self._hash = hash(("Par", left._hash, right._hash))

    __hash__ = Process.__hash__

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is Par
            and self._hash == other._hash
            and self.left == other.left
            and self.right == other.right
        )


class Restrict(Process):
    __slots__ = ("name", "body")
    __match_args__ = ("name", "body")

    def __init__(self, name: str, body: Process) -> None:
        self.name = name
        self.body = body
        self.free = body.free - {name}
        self._hash = hash(("Restrict", name, body._hash))

    __hash__ = Process.__hash__

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is Restrict
            and self._hash == other._hash
            and self.name == other.name
            and self.body == other.body
        )


class Call(Process):
    __slots__ = ("ident", "args")
    __match_args__ = ("ident", "args")

    def __init__(self, ident: str, args: tuple[str, ...] = ()) -> None:
        self.ident = ident
        self.args = tuple(args)
        self.free = frozenset(self.args)
        self._hash = hash(("Call", ident, self.args))

    __hash__ = Process.__hash__

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is Call
            and self._hash == other._hash
            and self.ident == other.ident
            and self.args == other.args
        )


class ElseNext(Process):
    __slots__ = ("now", "later")
    __match_args__ = ("now", "later")

    def __init__(self, now: Process, later: Process) -> None:
        self.now = now
        self.later = later
        self.free = now.free | later.free
        self._hash = hash(("ElseNext", now._hash, later._hash))

    __hash__ = Process.__hash__

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is ElseNext
            and self._hash == other._hash
            and self.now == other.now
            and self.later == other.later
        )


# ---------------------------------------------------------------------------
# definition tables


@dataclass(frozen=True)
class Definition:
    params: tuple[str, ...]
    body: Process


class DefTable:
    """One defining equation per identifier.

    The table is filled while parsing (or by generators) and is treated
    as frozen afterwards: every free name of a body must be among its
    parameters, so unfolding a call is substitution of arguments for
    parameters and nothing else.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: dict[str, Definition] | None = None) -> None:
        self.entries = dict(entries) if entries else {}

    def define(self, ident: str, params: tuple[str, ...], body: Process) -> None:
        if ident in self.entries:
            raise ValueError("duplicate definition of %s" % ident)
        bad = body.free - set(params)
        if bad:
            raise ValueError(
                "definition of %s uses free name(s) %s not among its parameters"
                % (ident, ", ".join(sorted(bad)))
            )
        self.entries[ident] = Definition(tuple(params), body)

    def lookup(self, ident: str) -> Definition:
        try:
            return self.entries[ident]
        except KeyError:
            raise KeyError("unbound process identifier %s" % ident) from None

    def __contains__(self, ident: str) -> bool:
        return ident in self.entries

    def copy(self) -> "DefTable":
        return DefTable(self.entries)

    def __repr__(self) -> str:
        return "DefTable(%s)" % ", ".join(sorted(self.entries))


# Derived forms.  tau.P stands for new a.(a.P | 'a.0) with a fresh,
# tick.P for {0} else P, Omega for the process that keeps taking
# internal steps forever, and emit(a) for the signal that offers 'a
# for the rest of the instant and vanishes at the next one.

OMEGA_IDENT = "#Omega"
EMIT_IDENT = "emit"


def make_tau(cont: Process, fresh: str) -> Process:
    """Encode an internal step in front of `cont` using a fresh name."""
    if fresh in cont.free:
        raise ValueError("%s is not fresh for the continuation" % fresh)
    return Restrict(fresh, Par(Prefix("in", fresh, cont), Prefix("out", fresh, NIL)))


def make_tick(cont: Process) -> Process:
    return ElseNext(NIL, cont)


def internal_choice(left: Process, right: Process, supply: NameSupply) -> Process:
    return Sum(make_tau(left, supply.fresh()), make_tau(right, supply.fresh()))


def omega_definition() -> Definition:
    # The encoding's bound name is fixed: it is alpha-irrelevant.
    return Definition((), make_tau(Call(OMEGA_IDENT), "#1"))


def emit_definition() -> Definition:
    body = ElseNext(Prefix("out", "a", Call(EMIT_IDENT, ("a",))), NIL)
    return Definition(("a",), body)


def ensure_builtins(defs: DefTable, *, omega: bool = False, emit: bool = False) -> None:
    if omega and OMEGA_IDENT not in defs:
        defs.entries[OMEGA_IDENT] = omega_definition()
    if emit and EMIT_IDENT not in defs:
        defs.entries[EMIT_IDENT] = emit_definition()


# ---------------------------------------------------------------------------
# traversals


def all_names(p: Process) -> frozenset[str]:
    """Every name occurring in p, free or bound."""
    acc: set[str] = set()
    stack = [p]
    while stack:
        q = stack.pop()
        match q:
            case Nil():
                pass
            case Prefix(_, a, k):
                acc.add(a)
                stack.append(k)
            case Sum(l, r) | Par(l, r):
                stack.append(l)
                stack.append(r)
            case Restrict(a, b):
                acc.add(a)
                stack.append(b)
            case Call(_, args):
                acc.update(args)
            case ElseNext(n, l):
                stack.append(n)
                stack.append(l)
    return frozenset(acc)


def substitute(p: Process, mapping: dict[str, str]) -> Process:
    """Simultaneous capture-avoiding renaming of free names.

    Bound names are renamed, to machine-fresh names, only when one of
    them would capture an incoming name.
    """
    live = {x: y for x, y in mapping.items() if x != y}
    if not live:
        return p
    supply = NameSupply(avoid=all_names(p) | set(live.values()))

    def go(q: Process, m: dict[str, str]) -> Process:
        relevant = {x: y for x, y in m.items() if x in q.free}
        if not relevant:
            return q
        match q:
            case Prefix(pol, a, k):
                return Prefix(pol, relevant.get(a, a), go(k, relevant))
            case Sum(l, r):
                return Sum(go(l, relevant), go(r, relevant))
            case Par(l, r):
                return Par(go(l, relevant), go(r, relevant))
            case Restrict(a, b):
                inner = {x: y for x, y in relevant.items() if x != a}
                if a in inner.values():
                    a2 = supply.fresh()
                    return Restrict(a2, go(b, {**inner, a: a2}))
                return Restrict(a, go(b, inner))
            case Call(ident, args):
                return Call(ident, tuple(relevant.get(x, x) for x in args))
            case ElseNext(n, l):
                return ElseNext(go(n, relevant), go(l, relevant))
        raise AssertionError("unreachable node %r" % q)

    return go(p, live)


# ---------------------------------------------------------------------------
# pretty printing

# Precedence: prefix-like forms bind tighter than +, which binds
# tighter than |.  new and else extend as far right as a prefix chain
# can, so their bodies print at prefix level and pick up parentheses
# when they are sums or compositions.


def pretty(p: Process) -> str:
    return _pp(p, 0)


def _pp(p: Process, level: int) -> str:
    # level 0: composition, 1: sum, 2: prefix operand
    match p:
        case Nil():
            return "0"
        case Prefix(pol, a, k):
            act = a if pol == "in" else "'" + a
            return "%s.%s" % (act, _pp(k, 2))
        case Sum(l, r):
            text = "%s + %s" % (_pp(l, 1), _pp(r, 2))
            return "(%s)" % text if level >= 2 else text
        case Par(l, r):
            text = "%s | %s" % (_pp(l, 0), _pp(r, 1))
            return "(%s)" % text if level >= 1 else text
        case Restrict(a, b):
            return "new %s. %s" % (a, _pp(b, 2))
        case Call(ident, args):
            return "%s(%s)" % (ident, ", ".join(args))
        case ElseNext(n, l):
            return "{%s} else %s" % (_pp(n, 0), _pp(l, 2))
    raise AssertionError("unreachable node %r" % p)


# ---------------------------------------------------------------------------
# canonical forms

# Canonical forms are the state identities of the transition engine.
# Composition is flattened, stripped of inert units and sorted; sums
# are flattened and sorted but keep their inert summands, so that the
# rule letting time pass through a sum stays visible in traces; dead
# restrictions are dropped; live restrictions get machine names, each
# binder taking the least index unused in its body.  Every rewrite
# performed here preserves strong transitions.


def canonicalize(p: Process) -> Process:
    return _canon(p, {})


def _canon(p: Process, ren: dict[str, str]) -> Process:
    # `ren` carries the chosen image of every enclosing binder and is
    # applied to free occurrences on the way down, so alpha-variants
    # land on one representative without a separate renaming pass.
    match p:
        case Nil():
            return p
        case Call(f, args):
            if not any(a in ren for a in args):
                return p
            return Call(f, tuple(ren.get(a, a) for a in args))
        case Prefix(pol, a, k):
            k2 = _canon(k, ren)
            a2 = ren.get(a, a)
            return p if (k2 is k and a2 is a) else Prefix(pol, a2, k2)
        case Sum(_, _):
            # a branch may canonicalize into a sum itself, so flatten again
            parts = [
                r for q in _flat(p, Sum) for r in _flat(_canon(q, ren), Sum)
            ]
            parts.sort(key=pretty)
            return _rebuild(parts, Sum)
        case Par(_, _):
            parts = [
                r
                for q in _flat(p, Par)
                for r in _flat(_canon(q, ren), Par)
                if r != NIL
            ]
            if not parts:
                return NIL
            if len(parts) == 1:
                return parts[0]
            parts.sort(key=pretty)
            return _rebuild(parts, Par)
        case Restrict(a, b):
            if a not in b.free:
                return _canon(b, ren)
            # the binder becomes the first machine name clashing with no
            # free name of the body; bound names of the body do not
            # matter, their own scopes rename independently
            occupied = {ren.get(x, x) for x in b.free if x != a}
            k = 1
            while "#%d" % k in occupied:
                k += 1
            cand = "#%d" % k
            b2 = _canon(b, {**ren, a: cand})
            return p if (cand == a and b2 is b) else Restrict(cand, b2)
        case ElseNext(n, l):
            n2, l2 = _canon(n, ren), _canon(l, ren)
            return p if (n2 is n and l2 is l) else ElseNext(n2, l2)
    raise AssertionError("unreachable node %r" % p)


def _flat(p: Process, cls: type) -> list[Process]:
    if type(p) is cls:
        return _flat(p.left, cls) + _flat(p.right, cls)  # type: ignore[attr-defined]
    return [p]


def _rebuild(parts: list[Process], cls: type) -> Process:
    acc = parts[0]
    for q in parts[1:]:
        acc = cls(acc, q)
    return acc


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    is_ccs: bool
    is_sl: bool


def classify(p: Process, defs: DefTable) -> Classification:
    """Which sublanguages the term and its referenced bodies fit.

    A term is CCS when no else_next occurs in it or in any transitively
    referenced definition body.  It fits the signal fragment when it is
    built from inaction, signal emission, presence tests, composition,
    restriction and calls whose bodies fit as well; the emission and
    presence encodings count as atoms.
    """
    return Classification(_is_ccs(p, defs, set()), _is_sl(p, defs, set()))


def _is_ccs(p: Process, defs: DefTable, seen: set[str]) -> bool:
    match p:
        case Nil():
            return True
        case Prefix(_, _, k):
            return _is_ccs(k, defs, seen)
        case Sum(l, r) | Par(l, r):
            return _is_ccs(l, defs, seen) and _is_ccs(r, defs, seen)
        case Restrict(_, b):
            return _is_ccs(b, defs, seen)
        case Call(ident, _):
            if ident in seen:
                return True
            seen.add(ident)
            return _is_ccs(defs.lookup(ident).body, defs, seen)
        case ElseNext(_, _):
            return False
    raise AssertionError("unreachable node %r" % p)


def _is_sl(p: Process, defs: DefTable, seen: set[str]) -> bool:
    match p:
        case Nil():
            return True
        case Par(l, r):
            return _is_sl(l, defs, seen) and _is_sl(r, defs, seen)
        case Restrict(_, b):
            return _is_sl(b, defs, seen)
        case ElseNext(Prefix("in", _, now), later):
            # presence test: read the signal now or move on next instant
            return _is_sl(now, defs, seen) and _is_sl(later, defs, seen)
        case ElseNext(Prefix("out", _, Call(_, _)), Nil()):
            # recursive emission shape: offer the signal, vanish on tick
            return True
        case Call(ident, _):
            if ident in seen:
                return True
            seen.add(ident)
            return _is_sl(defs.lookup(ident).body, defs, seen)
        case _:
            return False


# ---------------------------------------------------------------------------
# static contexts


class StaticContext:
    """One-hole contexts built from composition and restriction."""

    __slots__ = ()


class Hole(StaticContext):
    __slots__ = ()
    __match_args__ = ()


HOLE = Hole()


class ParWith(StaticContext):
    __slots__ = ("ctx", "proc")
    __match_args__ = ("ctx", "proc")

    def __init__(self, ctx: StaticContext, proc: Process) -> None:
        self.ctx = ctx
        self.proc = proc


class RestrictCtx(StaticContext):
    __slots__ = ("name", "ctx")
    __match_args__ = ("name", "ctx")

    def __init__(self, name: str, ctx: StaticContext) -> None:
        self.name = name
        self.ctx = ctx


def plug(ctx: StaticContext, p: Process) -> Process:
    """Fill the hole.  Contexts may bind free names of the plugged term."""
    match ctx:
        case Hole():
            return p
        case ParWith(c, q):
            return Par(plug(c, p), q)
        case RestrictCtx(a, c):
            return Restrict(a, plug(c, p))
    raise AssertionError("unreachable context %r" % ctx)


def pretty_context(ctx: StaticContext) -> str:
    match ctx:
        case Hole():
            return "[]"
        case ParWith(c, q):
            return "%s | %s" % (pretty_context(c), _pp(q, 1))
        case RestrictCtx(a, c):
            return "new %s. (%s)" % (a, pretty_context(c))
    raise AssertionError("unreachable context %r" % ctx)
