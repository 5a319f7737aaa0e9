"""Extended Kripke polynomial functors: syntax tree, DSL parser and printer.

Grammar (loosest binding first)::

    F ::= F + F | F * F | F . F | F ^ (d1,...,dk) | atom
    atom ::= Id | Const(c1,...,ck) | P | Bag | Dist | ( F )

``+`` and ``*`` associate to the left, ``.`` to the right.
"""
from dataclasses import dataclass

from .errors import ParseError
from .lexer import TokenStream


class FunctorExpr:
    __slots__ = ()

    def __str__(self):
        return format_functor(self)


@dataclass(frozen=True)
class Identity(FunctorExpr):
    pass


@dataclass(frozen=True)
class Constant(FunctorExpr):
    names: tuple

    def __post_init__(self):
        _check_symbols(self.names, "constant")


@dataclass(frozen=True)
class FinPow(FunctorExpr):
    pass


@dataclass(frozen=True)
class FinBag(FunctorExpr):
    pass


@dataclass(frozen=True)
class FinDist(FunctorExpr):
    pass


@dataclass(frozen=True)
class Compose(FunctorExpr):
    outer: FunctorExpr
    inner: FunctorExpr


@dataclass(frozen=True)
class Sum(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr


@dataclass(frozen=True)
class Product(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr


@dataclass(frozen=True)
class Exponent(FunctorExpr):
    base: FunctorExpr
    domain: tuple

    def __post_init__(self):
        _check_symbols(self.domain, "exponent domain")


def _check_symbols(names, what):
    if not isinstance(names, tuple):
        raise TypeError(f"{what} symbols must be a tuple")
    if not names:
        raise ValueError(f"{what} list must be non-empty")
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise ValueError(f"duplicate symbol {dup!r} in {what} list")


def preserves_finite(F):
    """True iff no Bag or Dist occurs in F."""
    if isinstance(F, (FinBag, FinDist)):
        return False
    if isinstance(F, (Identity, Constant, FinPow)):
        return True
    if isinstance(F, Exponent):
        return preserves_finite(F.base)
    if isinstance(F, Compose):
        return preserves_finite(F.outer) and preserves_finite(F.inner)
    return preserves_finite(F.left) and preserves_finite(F.right)


def contains(F, kind):
    if isinstance(F, kind):
        return True
    if isinstance(F, Exponent):
        return contains(F.base, kind)
    if isinstance(F, Compose):
        return contains(F.outer, kind) or contains(F.inner, kind)
    if isinstance(F, (Sum, Product)):
        return contains(F.left, kind) or contains(F.right, kind)
    return False


def product_leaves(F):
    """Flatten a (possibly nested) product into its factor list."""
    if isinstance(F, Product):
        return product_leaves(F.left) + product_leaves(F.right)
    return [F]


# --- parsing ---------------------------------------------------------------

_ATOMS = {"Id": Identity, "P": FinPow, "Bag": FinBag, "Dist": FinDist}


def parse_functor(text):
    ts = TokenStream(text)
    F = _parse_sum(ts)
    ts.expect_eof()
    return F


def _parse_sum(ts):
    F = _parse_product(ts)
    while ts.accept("+"):
        F = Sum(F, _parse_product(ts))
    return F


def _parse_product(ts):
    F = _parse_compose(ts)
    while ts.accept("*"):
        F = Product(F, _parse_compose(ts))
    return F


def _parse_compose(ts):
    F = _parse_power(ts)
    if ts.accept("."):
        return Compose(F, _parse_compose(ts))
    return F


def _parse_power(ts):
    F = _parse_atom(ts)
    while ts.at("^"):
        ts.next()
        F = Exponent(F, _symbol_list(ts, "exponent domain"))
    return F


def _symbol_list(ts, what):
    start = ts.peek().pos
    ts.expect("(")
    names = tuple(ts.sep_list(")", lambda: ts.expect_name("symbol")))
    if not names:
        raise ParseError(f"empty {what} list", start, ts.text)
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise ParseError(f"duplicate symbol {dup!r} in {what} list", start, ts.text)
    return names


def _parse_atom(ts):
    tok = ts.peek()
    if ts.accept("("):
        F = _parse_sum(ts)
        ts.expect(")")
        return F
    if tok.kind == "name":
        if tok.value in _ATOMS:
            ts.next()
            return _ATOMS[tok.value]()
        if tok.value == "Const":
            ts.next()
            return Constant(_symbol_list(ts, "constant"))
    ts.error(f"expected a functor, found {tok.value or 'end of input'!r}")


# --- printing --------------------------------------------------------------

_PREC = {Sum: 0, Product: 1, Compose: 2, Exponent: 3}


def format_functor(F, prec=0):
    if isinstance(F, Identity):
        return "Id"
    if isinstance(F, FinPow):
        return "P"
    if isinstance(F, FinBag):
        return "Bag"
    if isinstance(F, FinDist):
        return "Dist"
    if isinstance(F, Constant):
        return "Const(" + ",".join(F.names) + ")"
    my = _PREC[type(F)]
    if isinstance(F, Exponent):
        s = format_functor(F.base, 3) + "^(" + ",".join(F.domain) + ")"
    elif isinstance(F, Compose):
        s = format_functor(F.outer, 3) + "." + format_functor(F.inner, 2)
    elif isinstance(F, Product):
        s = format_functor(F.left, 1) + "*" + format_functor(F.right, 2)
    else:
        s = format_functor(F.left, 0) + "+" + format_functor(F.right, 1)
    return f"({s})" if my < prec else s


# --- proposition letters ------------------------------------------------------

def prop_tag(subset):
    """Constant symbol naming a set of proposition letters."""
    return "_".join(sorted(subset)) if subset else "_"


def prop_subsets(props):
    from itertools import combinations

    props = sorted(props)
    return [frozenset(c) for k in range(len(props) + 1) for c in combinations(props, k)]


def with_props(F, props):
    """Wrap F as Const(all subsets of props) * F."""
    props = list(props)
    for p in props:
        if not p.isalnum():
            raise ValueError(f"proposition letter must be alphanumeric: {p!r}")
    if len(set(props)) != len(props):
        raise ValueError("duplicate proposition letter")
    tags = tuple(prop_tag(s) for s in prop_subsets(props))
    return Product(Constant(tags), F)


def tag_props(tag):
    return frozenset() if tag == "_" else frozenset(tag.split("_"))
