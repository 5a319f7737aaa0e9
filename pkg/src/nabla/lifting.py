"""Relation lifting, lifted members and relations between finite carriers.

Internally a lifting is decided against a *leaf relation*: a predicate on
the elements sitting at identity positions.  Composition threads the
inner lifting in as the leaf relation of the outer functor.
"""
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product as cartesian

from .config import resolve_limit
from .core import base, enumerate_elements, typecheck
from .elements import (
    BagOf, ConstSym, DistOf, Inl, Inner, Inr, MapOf, PairOf, SetOf, atom_key,
    sort_atoms,
)
from .errors import (
    CarrierMismatch, EnumerationLimit, NotEnumerable, ParseError, TypeMismatch,
)
from .flow import transport
from .functors import (
    Compose, Constant, Exponent, FinBag, FinDist, FinPow, Identity, Product,
    Sum, preserves_finite,
)


# --- relations ---------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    domain: tuple
    codomain: tuple
    pairs: frozenset

    def __post_init__(self):
        dom, cod = set(self.domain), set(self.codomain)
        for x, y in self.pairs:
            if x not in dom or y not in cod:
                raise CarrierMismatch(f"pair ({x}, {y}) is outside the declared carriers")

    @classmethod
    def make(cls, domain, codomain, pairs):
        return cls(tuple(sort_atoms(set(domain))), tuple(sort_atoms(set(codomain))),
                   frozenset(pairs))

    @classmethod
    def identity(cls, X):
        return cls.make(X, X, [(x, x) for x in X])

    @classmethod
    def graph(cls, f, X, Y):
        return cls.make(X, Y, [(x, f[x]) for x in X])

    def holds(self, x, y):
        return (x, y) in self.pairs

    def converse(self):
        return Relation(self.codomain, self.domain, frozenset((y, x) for x, y in self.pairs))

    def sorted_pairs(self):
        return sorted(self.pairs, key=lambda p: (atom_key(p[0]), atom_key(p[1])))


def compose_relations(R, Q):
    """R;Q = {(x,z) | x R y and y Q z for some y}."""
    if set(R.codomain) != set(Q.domain):
        raise CarrierMismatch("codomain of the first relation differs from domain of the second")
    by_mid = {}
    for y, z in Q.pairs:
        by_mid.setdefault(y, []).append(z)
    pairs = {(x, z) for x, y in R.pairs for z in by_mid.get(y, ())}
    return Relation(R.domain, Q.codomain, frozenset(pairs))


def all_relations(X, Y):
    cells = [(x, y) for x in X for y in Y]
    for k in range(len(cells) + 1):
        for chosen in combinations(cells, k):
            yield Relation.make(X, Y, chosen)


def load_relation(text):
    """Read ``dom:``/``cod:`` lines followed by ``left<TAB>right`` pairs."""
    dom = cod = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("dom:"):
            dom = line[4:].split()
        elif line.startswith("cod:"):
            cod = line[4:].split()
        else:
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected 'left<TAB>right'")
            pairs.append(tuple(parts))
    if dom is None or cod is None:
        raise ParseError("relation file needs 'dom:' and 'cod:' lines")
    return Relation.make(dom, cod, pairs)


# --- lifting -----------------------------------------------------------------

def _mismatch(F, e):
    return TypeMismatch(f"element {e!r} does not have shape {F}")


def lift(F, a, b, rel):
    """(a, b) in the lifting of ``rel``, where rel relates identity-position leaves."""
    if isinstance(F, Identity):
        return rel(a, b)
    if isinstance(F, Constant):
        if not isinstance(a, ConstSym) or not isinstance(b, ConstSym):
            raise _mismatch(F, a if not isinstance(a, ConstSym) else b)
        return a.name == b.name
    if isinstance(F, FinPow):
        if not isinstance(a, SetOf) or not isinstance(b, SetOf):
            raise _mismatch(F, a if not isinstance(a, SetOf) else b)
        return (all(any(rel(x, y) for y in b.items) for x in a.items)
                and all(any(rel(x, y) for x in a.items) for y in b.items))
    if isinstance(F, (FinBag, FinDist)):
        return _flow(F, a, b, rel) is not None
    if isinstance(F, Compose):
        return lift(F.outer, a, b, _memo(lambda x, y: lift(F.inner, x, y, rel)))
    if isinstance(F, Sum):
        if isinstance(a, Inl) and isinstance(b, Inl):
            return lift(F.left, a.item, b.item, rel)
        if isinstance(a, Inr) and isinstance(b, Inr):
            return lift(F.right, a.item, b.item, rel)
        for e in (a, b):
            if not isinstance(e, (Inl, Inr)):
                raise _mismatch(F, e)
        return False
    if isinstance(F, Product):
        if not isinstance(a, PairOf) or not isinstance(b, PairOf):
            raise _mismatch(F, a if not isinstance(a, PairOf) else b)
        return lift(F.left, a.left, b.left, rel) and lift(F.right, a.right, b.right, rel)
    if isinstance(F, Exponent):
        for e in (a, b):
            if not isinstance(e, MapOf) or e.names != F.domain:
                raise _mismatch(F, e)
        return all(lift(F.base, x, y, rel) for x, y in zip(a.items, b.items))
    raise TypeError(f"not a functor expression: {F!r}")


def _memo(rel):
    cache = {}

    def cached(x, y):
        k = (x, y)
        if k not in cache:
            cache[k] = rel(x, y)
        return cache[k]

    return cached


def _flow(F, a, b, rel):
    kind = BagOf if isinstance(F, FinBag) else DistOf
    if not isinstance(a, kind) or not isinstance(b, kind):
        raise _mismatch(F, a if not isinstance(a, kind) else b)
    allowed = [(x, y) for x, _ in a.items for y, _ in b.items if rel(x, y)]
    return transport(a.items, b.items, allowed)


def atom_relation(rel):
    """Leaf relation on ``Inner`` atoms from a predicate on raw atoms."""
    def on_leaves(x, y):
        if not isinstance(x, Inner) or not isinstance(y, Inner):
            raise TypeMismatch("identity position does not hold an atom")
        return rel(x.value, y.value)
    return on_leaves


def in_lifting(F, R, e1, e2):
    """(e1, e2) in the F-lifting of the relation R."""
    typecheck(F, e1, R.domain)
    typecheck(F, e2, R.codomain)
    return lift(F, e1, e2, atom_relation(R.holds))


def lifting_witness(F, R, e1, e2):
    """A transport plan rho for Bag/Dist liftings, keyed by atom pairs; None if unrelated."""
    if not isinstance(F, (FinBag, FinDist)):
        raise TypeMismatch("flow witnesses exist only for Bag and Dist")
    typecheck(F, e1, R.domain)
    typecheck(F, e2, R.codomain)
    plan = _flow(F, e1, e2, atom_relation(R.holds))
    if plan is None:
        return None
    return {(x.value, y.value): w for (x, y), w in plan.items()}


def is_member(x, U):
    return x in U


# --- lifted members ------------------------------------------------------------

class _Budget:
    def __init__(self, limit):
        self.limit = resolve_limit(limit)

    def check(self, n):
        if n > self.limit:
            raise EnumerationLimit(f"lifted-member enumeration exceeds the cap of {self.limit}")


def lifted_members(F, X, Phi, limit=None):
    """All alpha in F X with alpha lifted-membership-related to Phi, canonically ordered.

    Phi is an element of F over subsets of X (atoms are frozensets).  The
    members are generated structurally: each position of Phi holding a set
    U contributes exactly the atoms of U (intersected with X).
    """
    Xs = frozenset(X)
    budget = _Budget(limit)

    def top(leaf):
        if not isinstance(leaf, Inner) or not isinstance(leaf.value, frozenset):
            raise TypeMismatch("lifted members need subsets of the carrier at identity positions")
        return [Inner(x) for x in sort_atoms(leaf.value & Xs)]

    out = _members(F, Phi, top, budget)
    return sorted(set(out), key=lambda e: e.key)


def _members(F, phi, leafgen, budget):
    if isinstance(F, Identity):
        return leafgen(phi)
    if isinstance(F, Constant):
        if not isinstance(phi, ConstSym):
            raise _mismatch(F, phi)
        return [phi]
    if isinstance(F, FinPow):
        if not isinstance(phi, SetOf):
            raise _mismatch(F, phi)
        groups = [frozenset(leafgen(x)) for x in phi.items]
        if any(not g for g in groups):
            return []
        universe = sorted(frozenset().union(*groups), key=lambda e: e.key)
        budget.check(1 << len(universe) if len(universe) < 64 else budget.limit + 1)
        out = []
        for k in range(len(universe) + 1):
            for c in combinations(universe, k):
                s = frozenset(c)
                if all(s & g for g in groups):
                    out.append(SetOf(c, presorted=True))
        return out
    if isinstance(F, FinBag):
        if not isinstance(phi, BagOf):
            raise _mismatch(F, phi)
        splits = []
        for x, n in phi.items:
            cands = sorted(set(leafgen(x)), key=lambda e: e.key)
            if not cands:
                return []
            splits.append(list(combinations_with_replacement(cands, n)))
        _check_product(budget, [len(s) for s in splits])
        return [BagOf((e, 1) for part in choice for e in part) for choice in cartesian(*splits)]
    if isinstance(F, FinDist):
        raise NotEnumerable("lifted members of a distribution form an infinite set")
    if isinstance(F, Compose):
        cache = {}

        def inner(leaf):
            if leaf not in cache:
                cache[leaf] = sorted(set(_members(F.inner, leaf, leafgen, budget)),
                                     key=lambda e: e.key)
            return cache[leaf]

        return _members(F.outer, phi, inner, budget)
    if isinstance(F, Sum):
        if isinstance(phi, Inl):
            return [Inl(e) for e in _members(F.left, phi.item, leafgen, budget)]
        if isinstance(phi, Inr):
            return [Inr(e) for e in _members(F.right, phi.item, leafgen, budget)]
        raise _mismatch(F, phi)
    if isinstance(F, Product):
        if not isinstance(phi, PairOf):
            raise _mismatch(F, phi)
        ls = _members(F.left, phi.left, leafgen, budget)
        rs = _members(F.right, phi.right, leafgen, budget)
        _check_product(budget, [len(ls), len(rs)])
        return [PairOf(a, b) for a in ls for b in rs]
    if isinstance(F, Exponent):
        if not isinstance(phi, MapOf) or phi.names != F.domain:
            raise _mismatch(F, phi)
        parts = [_members(F.base, x, leafgen, budget) for x in phi.items]
        _check_product(budget, [len(p) for p in parts])
        return [MapOf(F.domain, c) for c in cartesian(*parts)]
    raise TypeError(f"not a functor expression: {F!r}")


def _check_product(budget, sizes):
    total = 1
    for s in sizes:
        total *= s
        if total > budget.limit:
            budget.check(total)


def lifted_members_filter(F, X, Phi, limit=None):
    """Lifted members by brute force: enumerate candidates, keep those related by lifted membership.

    Candidates range over F applied to the atoms occurring in Phi (restriction
    to the base support); for a top-level Bag each atom x is bounded by the
    total weight of the sets containing it.
    """
    support = frozenset().union(*base(F, Phi)) & frozenset(X) if base(F, Phi) else frozenset()
    rel = atom_relation(is_member)
    if isinstance(F, FinBag):
        cands = _bounded_bags(Phi, support)
    elif preserves_finite(F):
        cands = enumerate_elements(F, support, limit)
    else:
        raise NotEnumerable(f"no candidate bound for {F}")
    return [a for a in cands if lift(F, a, Phi, rel)]


def _bounded_bags(Phi, support):
    atoms = sort_atoms(support)
    total = Phi.total()
    bounds = [sum(c for U, c in Phi.items if x in U.value) for x in atoms]
    out = []
    for counts in cartesian(*[range(b + 1) for b in bounds]):
        if sum(counts) == total:
            out.append(BagOf((Inner(x), c) for x, c in zip(atoms, counts)))
    return sorted(out, key=lambda e: e.key)
