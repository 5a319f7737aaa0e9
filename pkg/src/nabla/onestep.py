"""Slim redistributions, the negation dual and one-step semantics.

One-step formulas are Boolean combinations of nablas whose arguments hold
depth-0 formulas over subset-variables of a finite carrier X; they denote
subsets of F X.
"""
from dataclasses import dataclass
from itertools import combinations, product as cartesian

from .config import resolve_limit
from .core import base, enumerate_elements, fmap
from .elements import BagOf, Inner, sort_atoms
from .errors import EnumerationLimit, NablaError, NotEnumerable
from .functors import FinBag, preserves_finite
from .lifting import atom_relation, is_member, lift, lifted_members
from .syntax import Conj, Disj, Nabla, Neg, Var


def _powerset(atoms):
    atoms = sort_atoms(atoms)
    return [frozenset(c) for k in range(len(atoms) + 1) for c in combinations(atoms, k)]


def _union_base(F, A):
    out = frozenset()
    for a in A:
        out |= base(F, a)
    return out


def slim_redistributions(F, A, limit=None):
    """All Phi over subsets of the joint base with every alpha in A a lifted member."""
    A = list(A)
    B = _union_base(F, A)
    rel = atom_relation(is_member)
    if isinstance(F, FinBag):
        cands = _srd_bag_candidates(A, B, resolve_limit(limit))
    elif preserves_finite(F):
        cands = enumerate_elements(F, _powerset(B), limit)
    else:
        raise NotEnumerable(f"slim redistributions are not enumerable for {F}")
    return [phi for phi in cands if all(lift(F, a, phi, rel) for a in A)]


def _srd_bag_candidates(A, B, limit):
    if not A:
        raise NotEnumerable("slim redistributions of the empty set of bags form an infinite set")
    totals = {a.total() for a in A}
    if len(totals) != 1:
        return []
    total = totals.pop()
    subsets = [U for U in _powerset(B) if U]
    bounds = [min(sum(c for x, c in a.items if x.value in U) for a in A) for U in subsets]
    count = 1
    for b in bounds:
        count *= b + 1
        if count > limit:
            raise EnumerationLimit(f"bag redistribution candidates exceed the cap of {limit}")
    out = []
    for counts in cartesian(*[range(b + 1) for b in bounds]):
        if sum(counts) == total:
            out.append(BagOf((Inner(U), c) for U, c in zip(subsets, counts)))
    return sorted(out, key=lambda e: e.key)


def conj_of_set(U):
    return Conj(U)


def disj_of_set(U):
    return Disj(U)


def neg_dual(F, alpha, limit=None):
    """Q(alpha): nabla arguments whose disjunction is equivalent to the negation of nabla alpha."""
    if not preserves_finite(F):
        raise NotEnumerable(f"negation dual needs a functor preserving finite sets, got {F}")
    B = base(F, alpha)
    avoids = atom_relation(lambda a, psi: a not in psi)
    out = set()
    for psi in enumerate_elements(F, _powerset(B), limit):
        if not lift(F, alpha, psi, avoids):
            out.add(fmap(F, lambda U: Conj(Neg(b) for b in U), psi))
    return sorted(out, key=lambda e: e.key)


# --- one-step semantics ---------------------------------------------------------------------

@dataclass
class OneStepContext:
    carrier: tuple
    variables: dict

    def __post_init__(self):
        self.carrier = tuple(sort_atoms(set(self.carrier)))
        X = frozenset(self.carrier)
        self.variables = {k: frozenset(v) for k, v in self.variables.items()}
        for name, U in self.variables.items():
            if not U <= X:
                raise NablaError(f"variable {name!r} is not a subset of the carrier")


def eval0(ctx, a):
    X = frozenset(ctx.carrier)
    if isinstance(a, Var):
        try:
            return ctx.variables[a.name]
        except KeyError:
            raise NablaError(f"unknown variable {a.name!r}") from None
    if isinstance(a, Neg):
        return X - eval0(ctx, a.arg)
    if isinstance(a, Conj):
        out = X
        for b in a.items:
            out &= eval0(ctx, b)
        return out
    if isinstance(a, Disj):
        out = frozenset()
        for b in a.items:
            out |= eval0(ctx, b)
        return out
    raise NablaError(f"{a} is not a depth-0 formula")


def eval1(F, ctx, a, limit=None, _all=None):
    """Subset of F X denoted by the one-step formula a."""
    if _all is None:
        _all = frozenset(enumerate_elements(F, ctx.carrier, limit))
    if isinstance(a, Nabla):
        phi = fmap(F, lambda b: eval0(ctx, b), a.arg)
        return frozenset(lifted_members(F, ctx.carrier, phi, limit))
    if isinstance(a, Neg):
        return _all - eval1(F, ctx, a.arg, limit, _all)
    if isinstance(a, Conj):
        out = _all
        for b in a.items:
            out &= eval1(F, ctx, b, limit, _all)
        return out
    if isinstance(a, Disj):
        out = frozenset()
        for b in a.items:
            out |= eval1(F, ctx, b, limit, _all)
        return out
    raise NablaError(f"{a} is not a one-step formula")


def one_step_equiv(F, ctx, a, b, limit=None):
    return eval1(F, ctx, a, limit) == eval1(F, ctx, b, limit)


def one_step_leq(F, ctx, a, b, limit=None):
    return eval1(F, ctx, a, limit) <= eval1(F, ctx, b, limit)


def lifted_atoms(F, partition, limit=None):
    """Nabla atoms over the blocks of a partition and their one-step cells.

    Returns the context (blocks named b0, b1, ... in canonical order) and a
    list of (alpha, cell) pairs, alpha ranging over F applied to the block
    variables.
    """
    blocks = [frozenset(b) for b in partition]
    if any(not b for b in blocks):
        raise NablaError("partition blocks must be non-empty")
    X = frozenset().union(*blocks) if blocks else frozenset()
    if sum(len(b) for b in blocks) != len(X):
        raise NablaError("partition blocks must be pairwise disjoint")
    blocks = sort_atoms(blocks)
    names = [f"b{i}" for i in range(len(blocks))]
    ctx = OneStepContext(tuple(X), dict(zip(names, blocks)))
    everything = frozenset(enumerate_elements(F, ctx.carrier, limit))
    atoms = []
    for alpha in enumerate_elements(F, [Var(n) for n in names], limit):
        atoms.append((alpha, eval1(F, ctx, Nabla(alpha, F), limit, everything)))
    return ctx, atoms
