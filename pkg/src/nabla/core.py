"""Action of functor expressions on finite sets and maps.

All recursions are written against a list of *leaves*: the elements that may
occupy an identity position.  At top level the leaves are ``Inner`` atoms of
the carrier; under ``Compose(A, B)`` the leaves of ``A`` are the elements of
``B`` over the original leaves.
"""
from itertools import combinations, product as cartesian

from .config import resolve_limit
from .elements import (
    BagOf, ConstSym, DistOf, Inl, Inner, Inr, MapOf, PairOf, SetOf, TElem,
    sort_atoms,
)
from .errors import CarrierMismatch, EnumerationLimit, NotFinitary, TypeMismatch
from .functors import (
    Compose, Constant, Exponent, FinBag, FinDist, FinPow, Identity, Product,
    Sum, preserves_finite,
)


def inner_leaves(X):
    return [Inner(x) for x in sort_atoms(set(X))]


# --- counting and enumeration ---------------------------------------------

def _size(F, n, cap):
    """|F applied to an n-element set|, saturated at ``cap + 1``."""
    over = cap + 1
    if isinstance(F, Identity):
        return min(n, over)
    if isinstance(F, Constant):
        return min(len(F.names), over)
    if isinstance(F, FinPow):
        return over if n >= over.bit_length() else min(1 << n, over)
    if isinstance(F, Compose):
        return _size(F.outer, _size(F.inner, n, cap), cap)
    if isinstance(F, Sum):
        return min(_size(F.left, n, cap) + _size(F.right, n, cap), over)
    if isinstance(F, Product):
        return min(_size(F.left, n, cap) * _size(F.right, n, cap), over)
    if isinstance(F, Exponent):
        b = _size(F.base, n, cap)
        if b <= 1:
            return b
        k = len(F.domain)
        return over if k * (b.bit_length() - 1) > over.bit_length() else min(b ** k, over)
    raise NotFinitary(f"functor {F} contains Bag or Dist")


def enumeration_size(F, n, limit=None):
    """Number of elements of F over an n-element set (saturated past the limit)."""
    _require_finite(F)
    return _size(F, n, resolve_limit(limit))


def _require_finite(F):
    if not preserves_finite(F):
        raise NotFinitary(f"functor {F} contains Bag or Dist; T X is infinite")


def enumerate_elements(F, X, limit=None, level=None):
    """Every element of F X exactly once, in canonical order."""
    _require_finite(F)
    limit = resolve_limit(limit)
    leaves = inner_leaves(X)
    size = _size(F, len(leaves), limit)
    if size > limit:
        raise EnumerationLimit(
            f"enumerating {F} over {len(leaves)} atoms exceeds the cap of {limit}",
            level=level,
        )
    return _enum(F, leaves)


def enum_over(F, leaves):
    """Enumerate F with the given (canonically sorted) identity-position leaves."""
    return _enum(F, leaves)


def _enum(F, leaves):
    if isinstance(F, Identity):
        return list(leaves)
    if isinstance(F, Constant):
        return [ConstSym(n, i) for i, n in enumerate(F.names)]
    if isinstance(F, FinPow):
        return [
            SetOf(c, presorted=True)
            for k in range(len(leaves) + 1)
            for c in combinations(leaves, k)
        ]
    if isinstance(F, Compose):
        return _enum(F.outer, _enum(F.inner, leaves))
    if isinstance(F, Sum):
        return [Inl(e) for e in _enum(F.left, leaves)] + [Inr(e) for e in _enum(F.right, leaves)]
    if isinstance(F, Product):
        right = _enum(F.right, leaves)
        return [PairOf(a, b) for a in _enum(F.left, leaves) for b in right]
    if isinstance(F, Exponent):
        vals = _enum(F.base, leaves)
        return [MapOf(F.domain, c) for c in cartesian(vals, repeat=len(F.domain))]
    raise NotFinitary(f"functor {F} contains Bag or Dist")


# --- functorial action -------------------------------------------------------

def _mismatch(F, e):
    return TypeMismatch(f"element {e!r} does not have shape {F}")


def map_leaves(F, e, leaf):
    """Rebuild e with every identity-position element replaced by leaf(it)."""
    if isinstance(F, Identity):
        if not isinstance(e, TElem):
            raise _mismatch(F, e)
        return leaf(e)
    if isinstance(F, Constant):
        if not isinstance(e, ConstSym) or e.name not in F.names:
            raise _mismatch(F, e)
        return e
    if isinstance(F, FinPow):
        if not isinstance(e, SetOf):
            raise _mismatch(F, e)
        return SetOf([leaf(x) for x in e.items])
    if isinstance(F, FinBag):
        if not isinstance(e, BagOf):
            raise _mismatch(F, e)
        return BagOf([(leaf(x), c) for x, c in e.items])
    if isinstance(F, FinDist):
        if not isinstance(e, DistOf):
            raise _mismatch(F, e)
        return DistOf([(leaf(x), w) for x, w in e.items])
    if isinstance(F, Compose):
        return map_leaves(F.outer, e, lambda x: map_leaves(F.inner, x, leaf))
    if isinstance(F, Sum):
        if isinstance(e, Inl):
            return Inl(map_leaves(F.left, e.item, leaf))
        if isinstance(e, Inr):
            return Inr(map_leaves(F.right, e.item, leaf))
        raise _mismatch(F, e)
    if isinstance(F, Product):
        if not isinstance(e, PairOf):
            raise _mismatch(F, e)
        return PairOf(map_leaves(F.left, e.left, leaf), map_leaves(F.right, e.right, leaf))
    if isinstance(F, Exponent):
        if not isinstance(e, MapOf) or e.names != F.domain:
            raise _mismatch(F, e)
        return MapOf(F.domain, [map_leaves(F.base, x, leaf) for x in e.items])
    raise TypeError(f"not a functor expression: {F!r}")


def _as_function(f):
    if callable(f):
        return f
    return f.__getitem__


def fmap(F, f, e):
    """(F f)(e) for f given as a callable or a mapping on atoms."""
    g = _as_function(f)

    def leaf(x):
        if not isinstance(x, Inner):
            raise _mismatch(Identity(), x)
        try:
            return Inner(g(x.value))
        except KeyError:
            raise CarrierMismatch(f"map is undefined on {x.value!r}") from None

    return map_leaves(F, e, leaf)


def iter_leaves(F, e):
    """Yield the identity-position elements of e (with multiplicity ignored)."""
    if isinstance(F, Identity):
        yield e
    elif isinstance(F, Constant):
        if not isinstance(e, ConstSym) or e.name not in F.names:
            raise _mismatch(F, e)
    elif isinstance(F, FinPow):
        if not isinstance(e, SetOf):
            raise _mismatch(F, e)
        yield from e.items
    elif isinstance(F, (FinBag, FinDist)):
        if not isinstance(e, BagOf if isinstance(F, FinBag) else DistOf):
            raise _mismatch(F, e)
        for x, _ in e.items:
            yield x
    elif isinstance(F, Compose):
        for x in iter_leaves(F.outer, e):
            yield from iter_leaves(F.inner, x)
    elif isinstance(F, Sum):
        if isinstance(e, Inl):
            yield from iter_leaves(F.left, e.item)
        elif isinstance(e, Inr):
            yield from iter_leaves(F.right, e.item)
        else:
            raise _mismatch(F, e)
    elif isinstance(F, Product):
        if not isinstance(e, PairOf):
            raise _mismatch(F, e)
        yield from iter_leaves(F.left, e.left)
        yield from iter_leaves(F.right, e.right)
    elif isinstance(F, Exponent):
        if not isinstance(e, MapOf) or e.names != F.domain:
            raise _mismatch(F, e)
        for x in e.items:
            yield from iter_leaves(F.base, x)
    else:
        raise TypeError(f"not a functor expression: {F!r}")


def base(F, e):
    """Least finite set of atoms Y with e in F Y."""
    out = set()
    for x in iter_leaves(F, e):
        if not isinstance(x, Inner):
            raise _mismatch(Identity(), x)
        out.add(x.value)
    return frozenset(out)


def typecheck(F, e, carrier=None):
    """Raise unless e is an element of F over ``carrier`` (any atoms if None)."""
    if not isinstance(e, TElem):
        raise TypeMismatch(f"not an element: {e!r}")
    atoms = base(F, e)
    if carrier is not None:
        stray = atoms - set(carrier)
        if stray:
            raise CarrierMismatch(
                f"atoms {sorted(map(str, stray))} are outside the carrier"
            )
    return e


def singleton_lift(F, e):
    """F applied to x |-> {x}."""
    return fmap(F, lambda x: frozenset([x]), e)
