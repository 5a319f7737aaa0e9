"""Independent reference implementations used by the tests.

Nothing here calls the lifting, semantics or proof code of the package; the
oracles work on plain Python sets and tuples.
"""
import random
from fractions import Fraction
from itertools import chain, combinations, product

from nabla import (
    BOT, TOP, Conj, Disj, Nabla, Neg, box, diamond, enumerate_elements, fmap,
    preserves_finite, prop_formula,
)
from nabla.elements import BagOf, ConstSym, DistOf, Inl, Inner, Inr, MapOf, PairOf, SetOf
from nabla.functors import (
    Compose, Constant, Exponent, FinBag, FinDist, FinPow, Identity, Product, Sum,
)


def powerset(xs):
    xs = list(xs)
    return [frozenset(c) for c in chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))]


# --- Egli-Milner and bag transport by exhaustive search ------------------------------

def egli_milner(A, B, rel):
    return all(any(rel(a, b) for b in B) for a in A) and all(any(rel(a, b) for a in A) for b in B)


def brute_rho(left, right, pairs):
    """Search every rho: pairs -> N with the required marginals.

    ``left`` and ``right`` map atoms to positive counts.
    """
    pairs = sorted(pairs)
    bounds = [min(left.get(x, 0), right.get(y, 0)) for x, y in pairs]
    for rho in product(*[range(b + 1) for b in bounds]):
        row, col = {}, {}
        for (x, y), r in zip(pairs, rho):
            row[x] = row.get(x, 0) + r
            col[y] = col.get(y, 0) + r
        if all(row.get(x, 0) == c for x, c in left.items()) and \
           all(col.get(y, 0) == c for y, c in right.items()) and \
           all(x in left for x in row if row[x]) and all(y in right for y in col if col[y]):
            return dict(zip(pairs, rho))
    return None


def search_rho(left, right, pairs):
    """Exhaustive backtracking search for rho with the required marginals.

    Each left atom's count is split over its related right atoms in every
    possible way, subject to the right atoms' remaining counts.
    """
    succ = {x: sorted(y for a, y in pairs if a == x and y in right) for x in left}
    xs = sorted(left)
    remaining = dict(right)
    rho = {}

    def splits(n, ys):
        if not ys:
            if n == 0:
                yield ()
            return
        head, rest = ys[0], ys[1:]
        for k in range(min(n, remaining[head]), -1, -1):
            for tail in splits(n - k, rest):
                yield (k,) + tail

    def go(i):
        if i == len(xs):
            return all(v == 0 for v in remaining.values())
        x = xs[i]
        ys = succ[x]
        for split in splits(left[x], ys):
            for y, k in zip(ys, split):
                remaining[y] -= k
                rho[(x, y)] = k
            if go(i + 1):
                return True
            for y, k in zip(ys, split):
                remaining[y] += k
                del rho[(x, y)]
        return False

    return {k: v for k, v in rho.items() if v} if go(0) else None


def bags_up_to(atoms, total):
    """Every multiset over atoms with total count at most ``total``, as dicts."""
    out = []
    for counts in product(range(total + 1), repeat=len(atoms)):
        if sum(counts) <= total:
            out.append({a: c for a, c in zip(atoms, counts) if c})
    return out


# --- classical Kripke semantics ----------------------------------------------------------

class Kripke:
    def __init__(self, worlds, succ, val):
        self.worlds = list(worlds)
        self.succ = {w: frozenset(succ[w]) for w in self.worlds}
        self.val = {w: frozenset(val[w]) for w in self.worlds}


def kripke_eval(M, w, f):
    """Truth of a modal formula given as nested tuples."""
    op = f[0]
    if op == "top":
        return True
    if op == "bot":
        return False
    if op == "p":
        return f[1] in M.val[w]
    if op == "not":
        return not kripke_eval(M, w, f[1])
    if op == "and":
        return kripke_eval(M, w, f[1]) and kripke_eval(M, w, f[2])
    if op == "or":
        return kripke_eval(M, w, f[1]) or kripke_eval(M, w, f[2])
    if op == "imp":
        return (not kripke_eval(M, w, f[1])) or kripke_eval(M, w, f[2])
    if op == "dia":
        return any(kripke_eval(M, v, f[1]) for v in M.succ[w])
    if op == "box":
        return all(kripke_eval(M, v, f[1]) for v in M.succ[w])
    raise ValueError(op)


def all_kripke_models(n_worlds, props):
    worlds = [f"w{i}" for i in range(n_worlds)]
    subsets = powerset(worlds)
    vals = powerset(props)
    for succ in product(subsets, repeat=n_worlds):
        for val in product(vals, repeat=n_worlds):
            yield Kripke(worlds, dict(zip(worlds, succ)), dict(zip(worlds, val)))


def kripke_counterexample(lhs, rhs, props, max_worlds=3):
    """A (model, world) where lhs holds and rhs fails, or None."""
    for n in range(1, max_worlds + 1):
        for M in all_kripke_models(n, props):
            for w in M.worlds:
                if kripke_eval(M, w, lhs) and not kripke_eval(M, w, rhs):
                    return M, w
    return None


def to_nabla(F, f):
    """Translate a tuple modal formula into the nabla language over wrapped P."""
    op = f[0]
    if op == "top":
        return TOP
    if op == "bot":
        return BOT
    if op == "p":
        return prop_formula(F, f[1])
    if op == "not":
        return Neg(to_nabla(F, f[1]))
    if op == "and":
        return Conj([to_nabla(F, f[1]), to_nabla(F, f[2])])
    if op == "or":
        return Disj([to_nabla(F, f[1]), to_nabla(F, f[2])])
    if op == "imp":
        return Disj([Neg(to_nabla(F, f[1])), to_nabla(F, f[2])])
    if op == "dia":
        return diamond(F, to_nabla(F, f[1]))
    if op == "box":
        return box(F, to_nabla(F, f[1]))
    raise ValueError(op)


# --- random formulas ----------------------------------------------------------------------------

def random_element_over(rng, F, atoms, limit=20000):
    """Uniform element of F over the given atoms (which may be formulas)."""
    atoms = list(atoms)
    idx = [str(i) for i in range(len(atoms))]
    elems = enumerate_elements(F, idx, limit)
    e = rng.choice(elems)
    return fmap(F, lambda i: atoms[int(i)], e)


def sample_element(rng, F, leaf):
    """Random element of F built top-down; ``leaf()`` draws identity leaves.

    Unlike :func:`random_element_over` this needs no enumeration, so it also
    covers bags and distributions.
    """
    if isinstance(F, Identity):
        return leaf()
    if isinstance(F, Constant):
        i = rng.randrange(len(F.names))
        return ConstSym(F.names[i], i)
    if isinstance(F, FinPow):
        return SetOf(leaf() for _ in range(rng.randint(0, 2)))
    if isinstance(F, FinBag):
        return BagOf((leaf(), rng.randint(1, 2)) for _ in range(rng.randint(0, 2)))
    if isinstance(F, FinDist):
        if rng.random() < 0.5:
            return DistOf([(leaf(), 1)])
        w = Fraction(rng.randint(1, 3), 4)
        return DistOf([(leaf(), w), (leaf(), 1 - w)])
    if isinstance(F, Compose):
        return sample_element(rng, F.outer, lambda: sample_element(rng, F.inner, leaf))
    if isinstance(F, Sum):
        if rng.random() < 0.5:
            return Inl(sample_element(rng, F.left, leaf))
        return Inr(sample_element(rng, F.right, leaf))
    if isinstance(F, Product):
        return PairOf(sample_element(rng, F.left, leaf), sample_element(rng, F.right, leaf))
    if isinstance(F, Exponent):
        return MapOf(F.domain, [sample_element(rng, F.base, leaf) for _ in F.domain])
    raise TypeError(F)


def sample_preimage(rng, F, e, leaf_pre):
    """Random element whose image under F f is e; ``leaf_pre`` inverts f on a leaf."""
    if isinstance(F, Identity):
        return leaf_pre(e)
    if isinstance(F, Constant):
        return e
    if isinstance(F, FinPow):
        return SetOf(leaf_pre(x) for x in e.items for _ in range(rng.randint(1, 2)))
    if isinstance(F, FinBag):
        parts = []
        for x, c in e.items:
            while c:
                k = rng.randint(1, c)
                parts.append((leaf_pre(x), k))
                c -= k
        return BagOf(parts)
    if isinstance(F, FinDist):
        parts = []
        for x, w in e.items:
            cut = w * Fraction(rng.randint(0, 2), 2)
            parts += [(leaf_pre(x), cut), (leaf_pre(x), w - cut)]
        return DistOf([(x, w) for x, w in parts if w])
    if isinstance(F, Compose):
        return sample_preimage(rng, F.outer, e,
                               lambda x: sample_preimage(rng, F.inner, x, leaf_pre))
    if isinstance(F, Sum):
        if isinstance(e, Inl):
            return Inl(sample_preimage(rng, F.left, e.item, leaf_pre))
        return Inr(sample_preimage(rng, F.right, e.item, leaf_pre))
    if isinstance(F, Product):
        return PairOf(sample_preimage(rng, F.left, e.left, leaf_pre),
                      sample_preimage(rng, F.right, e.right, leaf_pre))
    if isinstance(F, Exponent):
        return MapOf(F.domain, [sample_preimage(rng, F.base, x, leaf_pre) for x in e.items])
    raise TypeError(F)


def random_formula(rng, F, d, leaves=(), width=2):
    """Random formula of depth at most d; depth-0 pieces drawn from ``leaves``."""
    if d == 0 or rng.random() < 0.25:
        pool = list(leaves) + [TOP, BOT]
        a = rng.choice(pool)
        return Neg(a) if rng.random() < 0.3 else a
    kind = rng.random()
    if kind < 0.55:
        subs = [random_formula(rng, F, d - 1, leaves, width) for _ in range(rng.randint(1, width))]
        if preserves_finite(F):
            return Nabla(random_element_over(rng, F, subs), F)
        return Nabla(sample_element(rng, F, lambda: Inner(rng.choice(subs))), F)
    if kind < 0.7:
        return Neg(random_formula(rng, F, d, leaves, width))
    parts = [random_formula(rng, F, d, leaves, width) for _ in range(rng.randint(0, 2))]
    return (Conj if kind < 0.85 else Disj)(parts)


def rng_for(seed):
    return random.Random(seed)
