"""Concrete elements of T X in canonical (standardized) form.

Every element carries a ``key``: a nested tuple giving the canonical total
order.  Equality and hashing go through the key, so two elements are equal
iff their canonical forms coincide.  Collections are sorted by key at
construction; sets are deduplicated, bags keep only positive counts and
distributions only positive weights.

Composition ``F . G`` is represented by nesting: the identity positions of
an F-shaped element hold G-shaped elements directly.
"""
from fractions import Fraction
from functools import lru_cache


class TElem:
    __slots__ = ("key", "_hash")

    def __eq__(self, other):
        return isinstance(other, TElem) and (self is other or self.key == other.key)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __gt__(self, other):
        return self.key > other.key

    def __ge__(self, other):
        return self.key >= other.key

    def __repr__(self):
        return f"{type(self).__name__}<{format_elem_raw(self)}>"


def atom_key(v):
    """Sort key for inner values (carrier atoms)."""
    if isinstance(v, str):
        return (0, v)
    if isinstance(v, TElem):
        return (2, v.key)
    if isinstance(v, frozenset):
        return _frozenset_key(v)
    if hasattr(v, "key"):
        # formulas and anything else exposing a canonical key
        return (3, v.key)
    if isinstance(v, int):
        return (1, v)
    if isinstance(v, tuple):
        return (5, tuple(atom_key(x) for x in v))
    raise TypeError(f"unsupported atom {v!r}")


@lru_cache(maxsize=1 << 18)
def _frozenset_key(v):
    keys = sorted(atom_key(x) for x in v)
    return (4, len(keys), tuple(keys))


def sort_atoms(atoms):
    return sorted(atoms, key=atom_key)


def canonical_compare(e1, e2):
    """-1, 0 or 1 according to the canonical order."""
    k1, k2 = e1.key, e2.key
    return (k1 > k2) - (k1 < k2)


class Inner(TElem):
    """A carrier atom sitting at an identity position."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value
        self.key = (0, atom_key(value))
        self._hash = hash((0, value))


class ConstSym(TElem):
    __slots__ = ("name", "index")

    def __init__(self, name, index):
        self.name = name
        self.index = index
        self.key = (1, index, name)
        self._hash = hash((1, name))


def _dedup_sorted(items):
    items = sorted(items, key=_k)
    out = []
    for it in items:
        if not out or out[-1].key != it.key:
            out.append(it)
    return tuple(out)


def _k(e):
    return e.key


class SetOf(TElem):
    __slots__ = ("items",)

    def __init__(self, items, presorted=False):
        self.items = tuple(items) if presorted else _dedup_sorted(items)
        self.key = (2, len(self.items), tuple(i.key for i in self.items))
        self._hash = hash((2, tuple(i._hash for i in self.items)))


def _merge_weighted(pairs, zero):
    acc = {}
    order = {}
    for e, w in pairs:
        if e in acc:
            acc[e] += w
        else:
            acc[e] = w
            order[e] = e
    out = [(order[e], w) for e, w in acc.items() if w != zero]
    for _, w in out:
        if w < zero:
            raise ValueError("negative multiplicity")
    out.sort(key=lambda p: p[0].key)
    return tuple(out)


class BagOf(TElem):
    """Finite multiset, stored as its positive graph."""

    __slots__ = ("items",)

    def __init__(self, pairs):
        self.items = _merge_weighted(((e, int(c)) for e, c in pairs), 0)
        self.key = (3, len(self.items), tuple((e.key, c) for e, c in self.items))
        self._hash = hash((3, tuple((e._hash, c) for e, c in self.items)))

    def count(self, e):
        for x, c in self.items:
            if x == e:
                return c
        return 0

    def total(self):
        return sum(c for _, c in self.items)


class DistOf(TElem):
    """Finitely supported probability distribution with exact weights."""

    __slots__ = ("items",)

    def __init__(self, pairs):
        self.items = _merge_weighted(((e, Fraction(w)) for e, w in pairs), Fraction(0))
        if sum((w for _, w in self.items), Fraction(0)) != 1:
            raise ValueError("distribution weights must sum to exactly 1")
        self.key = (4, len(self.items), tuple((e.key, w) for e, w in self.items))
        self._hash = hash((4, tuple((e._hash, w) for e, w in self.items)))


class Inl(TElem):
    __slots__ = ("item",)

    def __init__(self, item):
        self.item = item
        self.key = (5, 0, item.key)
        self._hash = hash((5, 0, item._hash))


class Inr(TElem):
    __slots__ = ("item",)

    def __init__(self, item):
        self.item = item
        self.key = (5, 1, item.key)
        self._hash = hash((5, 1, item._hash))


class PairOf(TElem):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.key = (6, left.key, right.key)
        self._hash = hash((6, left._hash, right._hash))


class MapOf(TElem):
    """Total map from an exponent domain; ``items`` follow domain order."""

    __slots__ = ("names", "items")

    def __init__(self, names, items):
        self.names = tuple(names)
        self.items = tuple(items)
        if len(self.names) != len(self.items):
            raise ValueError("exponent map must be total")
        self.key = (7, tuple(i.key for i in self.items))
        self._hash = hash((7, tuple(i._hash for i in self.items)))

    def get(self, name):
        return self.items[self.names.index(name)]


def format_elem_raw(e):
    """Functor-free rendering, used for ``repr`` only."""
    if isinstance(e, Inner):
        return format_atom(e.value)
    if isinstance(e, ConstSym):
        return "'" + e.name
    if isinstance(e, SetOf):
        return "{" + ",".join(format_elem_raw(i) for i in e.items) + "}"
    if isinstance(e, BagOf):
        return "bag{" + ",".join(f"{format_elem_raw(i)}:{c}" for i, c in e.items) + "}"
    if isinstance(e, DistOf):
        return "dist{" + ",".join(f"{format_elem_raw(i)}:{w}" for i, w in e.items) + "}"
    if isinstance(e, Inl):
        return f"inl({format_elem_raw(e.item)})"
    if isinstance(e, Inr):
        return f"inr({format_elem_raw(e.item)})"
    if isinstance(e, PairOf):
        return f"({format_elem_raw(e.left)},{format_elem_raw(e.right)})"
    if isinstance(e, MapOf):
        return "[" + ",".join(f"{n}:{format_elem_raw(i)}" for n, i in zip(e.names, e.items)) + "]"
    return repr(e)


def format_atom(v):
    if isinstance(v, str):
        return v
    if isinstance(v, frozenset):
        return "{" + ",".join(format_atom(x) for x in sort_atoms(v)) + "}"
    if isinstance(v, TElem):
        return format_elem_raw(v)
    return str(v)
