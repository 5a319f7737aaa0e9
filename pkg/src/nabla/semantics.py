"""Coalgebras, model checking, the final sequence and the validity decider."""
from dataclasses import dataclass, field

from .config import resolve_limit
from .core import base, enumerate_elements, fmap, typecheck
from .elements import Inner, sort_atoms
from .errors import (
    EnumerationLimit, NablaError, ParseError, TypeMismatch, UnknownState,
)
from .functors import parse_functor, preserves_finite, with_props
from .lifting import lift, lifted_members
from .literals import format_element, parse_atom, read_element
from .lexer import TokenStream
from .syntax import Conj, Disj, Nabla, Neg, Var, depth, postorder, split_props
from .errors import NotFinitary


@dataclass
class Coalgebra:
    functor: object
    states: tuple
    transition: dict
    props: tuple = ()

    def __post_init__(self):
        self.states = tuple(sort_atoms(set(self.states)))
        missing = [s for s in self.states if s not in self.transition]
        if missing:
            raise UnknownState(f"no transition given for states {missing}")
        extra = [s for s in self.transition if s not in set(self.states)]
        if extra:
            raise UnknownState(f"transition given for undeclared states {extra}")
        for s in self.states:
            typecheck(self.functor, self.transition[s], self.states)

    def step(self, x):
        try:
            return self.transition[x]
        except KeyError:
            raise UnknownState(f"unknown state {x!r}") from None


@dataclass
class PointedCountermodel:
    coalgebra: Coalgebra
    state: object
    satisfied: object
    refuted: object
    labels: dict = field(default_factory=dict)


@dataclass
class Verdict:
    valid: bool
    level: int
    countermodel: PointedCountermodel = None

    def __bool__(self):
        return self.valid


# --- coalgebra files ---------------------------------------------------------------

def load_coalgebra(text):
    """Read ``functor:``, optional ``props:``, ``states:`` and a ``map:`` block."""
    functor = None
    props = ()
    states = None
    entries = []
    in_map = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(":", 1)[0].strip()
        if head in ("functor", "props", "states", "map", "witness") and ":" in line:
            rest = line.split(":", 1)[1].strip()
            in_map = head == "map"
            if head == "functor":
                functor = rest
            elif head == "props":
                props = tuple(rest.replace(",", " ").split())
            elif head == "states":
                states = rest.split()
            if in_map and rest:
                raise ParseError(f"line {lineno}: 'map:' takes no value")
            continue
        if not in_map:
            raise ParseError(f"line {lineno}: unexpected line outside the map block")
        if "->" not in line:
            raise ParseError(f"line {lineno}: expected 'state -> element'")
        entries.append((lineno, line))
    if functor is None or states is None:
        raise ParseError("coalgebra file needs 'functor:' and 'states:' lines")
    F = parse_functor(functor)
    if props:
        F = with_props(F, props)
    transition = {}
    for lineno, line in entries:
        src, elem_text = (part.strip() for part in line.split("->", 1))
        if src not in states:
            raise UnknownState(f"line {lineno}: unknown state {src!r}")
        if src in transition:
            raise ParseError(f"line {lineno}: duplicate transition for {src!r}")
        ts = TokenStream(elem_text)
        elem = read_element(ts, F, lambda t: Inner(parse_atom(t)))
        ts.expect_eof()
        stray = base(F, elem) - set(states)
        if stray:
            raise UnknownState(f"line {lineno}: unknown states {sorted(map(str, stray))}")
        transition[src] = elem
    return Coalgebra(F, tuple(states), transition, tuple(props))


def format_coalgebra(M, witness=None, labels=None):
    if M.props:
        lines = [f"functor: {split_props(M.functor)[1]}", "props: " + ",".join(M.props)]
    else:
        lines = [f"functor: {M.functor}"]
    lines.append("states: " + " ".join(map(str, M.states)))
    if labels:
        for s in M.states:
            if s in labels:
                lines.append(f"# {s} = {labels[s]}")
    lines.append("map:")
    for s in M.states:
        lines.append(f"  {s} -> {format_element(M.functor, M.transition[s])}")
    if witness is not None:
        lines.append(f"witness: {witness}")
    return "\n".join(lines) + "\n"


# --- model checking ------------------------------------------------------------------

def _check_functor(F, a):
    for b in postorder(a):
        if isinstance(b, Nabla) and b.functor != F:
            raise TypeMismatch(f"formula uses functor {b.functor}, model has {F}")


def meaning_sets(M, a):
    """Map every subformula of a to the set of states satisfying it."""
    _check_functor(M.functor, a)
    F = M.functor
    everything = frozenset(M.states)
    sat = {}
    for b in postorder(a):
        if isinstance(b, Var):
            raise NablaError(f"variable {b.name!r} has no meaning in a coalgebra")
        if isinstance(b, Neg):
            sat[b] = everything - sat[b.arg]
        elif isinstance(b, Conj):
            s = everything
            for c in b.items:
                s = s & sat[c]
            sat[b] = s
        elif isinstance(b, Disj):
            s = frozenset()
            for c in b.items:
                s = s | sat[c]
            sat[b] = s
        else:
            def forces(x, y):
                return x.value in sat[y.value]
            sat[b] = frozenset(x for x in M.states if lift(F, M.transition[x], b.arg, forces))
    return sat


def meaning_set(M, a):
    return meaning_sets(M, a)[a]


def model_check(M, x, a):
    M.step(x)
    return x in meaning_set(M, a)


# --- final sequence ------------------------------------------------------------------------

STAR = "*"


@dataclass
class FinalLevel:
    level: int
    carrier: list
    projection: dict = None


class FinalSequence:
    """Levels T^n 1 built on demand, with projections and stratified meanings."""

    def __init__(self, F, limit=None):
        if not preserves_finite(F):
            raise NotFinitary(f"functor {F} contains Bag or Dist")
        self.F = F
        self.limit = resolve_limit(limit)
        self.carriers = [[STAR]]
        self.projections = [None]
        self._mng = {}
        self._tg = {}

    def carrier(self, n):
        while len(self.carriers) <= n:
            k = len(self.carriers)
            try:
                elems = enumerate_elements(self.F, self.carriers[k - 1], self.limit, level=k)
            except EnumerationLimit as exc:
                raise EnumerationLimit(
                    f"level {k} of the final sequence exceeds the cap of {self.limit} "
                    f"(last completed level {k - 1})",
                    level=k,
                ) from exc
            if k == 1:
                proj = {e: STAR for e in elems}
            else:
                down = self.projections[k - 1]
                proj = {e: fmap(self.F, down, e) for e in elems}
            self.carriers.append(elems)
            self.projections.append(proj)
        return self.carriers[n]

    def level(self, n):
        self.carrier(n)
        return FinalLevel(n, self.carriers[n], self.projections[n])

    def mng(self, n, a):
        """Subset of T^n 1 denoted by a, computed directly at level n."""
        key = (n, a)
        if key in self._mng:
            return self._mng[key]
        carrier = self.carrier(n)
        if isinstance(a, Var):
            raise NablaError(f"variable {a.name!r} has no meaning in the final sequence")
        if isinstance(a, Neg):
            out = frozenset(carrier) - self.mng(n, a.arg)
        elif isinstance(a, Conj):
            out = frozenset(carrier)
            for c in a.items:
                out = out & self.mng(n, c)
        elif isinstance(a, Disj):
            out = frozenset()
            for c in a.items:
                out = out | self.mng(n, c)
        elif isinstance(a, Nabla):
            if a.functor != self.F:
                raise TypeMismatch(f"formula uses functor {a.functor}, expected {self.F}")
            if n == 0:
                raise NablaError("formula is deeper than the requested level")
            below = self.carrier(n - 1)
            phi = fmap(self.F, lambda b: self.mng(n - 1, b), a.arg)
            out = frozenset(
                e for e in lifted_members(self.F, below, phi, self.limit)
            )
        else:
            raise TypeError(f"not a formula: {a!r}")
        self._mng[key] = out
        return out

    def g(self):
        return self.carrier(1)[0]

    def tg(self, k, e):
        """(T^k g)(e) for e in T^k 1, landing in T^{k+1} 1."""
        key = (k, e)
        if key not in self._tg:
            if k == 0:
                out = self.g()
            else:
                out = fmap(self.F, lambda x: self.tg(k - 1, x), e)
            self._tg[key] = out
        return self._tg[key]


_SEQUENCES = {}


def final_sequence(F, limit=None):
    key = (F, resolve_limit(limit))
    if key not in _SEQUENCES:
        _SEQUENCES[key] = FinalSequence(F, limit)
    return _SEQUENCES[key]


def final_level(F, n, limit=None):
    return final_sequence(F, limit).level(n)


def mng_n(F, a, n=None, limit=None):
    """mng_n(a) as a subset of T^n 1; n defaults to depth(a)."""
    n = depth(a) if n is None else n
    if n < depth(a):
        raise NablaError(f"formula of depth {depth(a)} has no meaning at level {n}")
    return final_sequence(F, limit).mng(n, a)


def n_final_coalgebra(F, n, limit=None):
    fs = final_sequence(F, limit)
    carrier = fs.carrier(n)
    return Coalgebra(F, tuple(carrier), {z: fs.tg(n, z) for z in carrier})


def behavior_map(M, n):
    """x -> xi_n(x) in T^n 1."""
    if not preserves_finite(M.functor):
        raise NotFinitary(f"functor {M.functor} contains Bag or Dist")
    current = {x: STAR for x in M.states}
    for _ in range(n):
        current = {x: fmap(M.functor, current, M.transition[x]) for x in M.states}
    return current


# --- validity ----------------------------------------------------------------------------------

def _reachable(F, fs, n, z):
    seen = {z}
    stack = [z]
    while stack:
        x = stack.pop()
        for y in base(F, fs.tg(n, x)):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def level_text(F, n, e):
    """Literal for an element of T^n 1, nesting level by level."""
    if n == 0:
        return STAR
    return format_element(F, e, lambda x: level_text(F, n - 1, x.value))


def decide_valid(F, a, b, limit=None, props=()):
    """Decide a <= b over all F-coalgebras via the final sequence.

    ``props`` names the proposition letters when F is letter-wrapped; they
    are recorded on the countermodel so that its dump reloads with the same
    sugar.
    """
    n = max(depth(a), depth(b))
    fs = final_sequence(F, limit)
    left = fs.mng(n, a)
    right = fs.mng(n, b)
    bad = left - right
    if not bad:
        return Verdict(True, n)
    order = {e: i for i, e in enumerate(fs.carrier(n))}
    best = None
    for z in sorted(bad, key=order.__getitem__):
        reach = _reachable(F, fs, n, z)
        if best is None or len(reach) < len(best[1]):
            best = (z, reach)
    z, reach = best
    others = sorted(reach - {z}, key=order.__getitem__)
    names = {z: "z0"}
    for i, s in enumerate(others, 1):
        names[s] = f"z{i}"
    transition = {names[s]: fmap(F, names, fs.tg(n, s)) for s in reach}
    M = Coalgebra(F, tuple(names.values()), transition, tuple(props))
    labels = {names[s]: level_text(F, n, s) for s in reach}
    cm = PointedCountermodel(M, "z0", a, b, labels)
    if not model_check(M, "z0", a) or model_check(M, "z0", b):
        raise AssertionError("extracted countermodel does not refute the inequality")
    return Verdict(False, n, cm)
