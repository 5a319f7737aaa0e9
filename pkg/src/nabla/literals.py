"""Element literal syntax: parsing and functor-directed printing.

    atom            bare name or ``*``     (identity positions)
    'c              constant symbol
    {e1,...}        finite set
    bag{e:k,...}    bag with positive integer counts
    dist{e:p/q,...} distribution with exact rational weights
    (e1,...,en)     product; nested products may be written flat
    inl(e) inr(e)   sum injections
    [d1:e1,...]     exponent map

What sits at an identity position is decided by a pluggable leaf parser, so
the same grammar reads elements over atoms, over subsets of atoms, over
formulas or over elements of a previous final-sequence level.
"""
from fractions import Fraction

from .elements import (
    BagOf, ConstSym, DistOf, Inl, Inner, Inr, MapOf, PairOf, SetOf, format_atom,
)
from .errors import ParseError, TypeMismatch
from .functors import (
    Compose, Constant, Exponent, FinBag, FinDist, FinPow, Identity, Product,
    Sum, product_leaves,
)
from .lexer import TokenStream


class ElementTypeError(ParseError, TypeMismatch):
    """A literal is syntactically fine but does not have the required shape."""


def parse_atom(ts):
    """Default leaf value: a name, ``*``, or a set of atoms ``{a,b}``."""
    if ts.accept("*"):
        return "*"
    if ts.accept("{"):
        return frozenset(ts.sep_list("}", lambda: parse_atom(ts)))
    tok = ts.peek()
    if tok.kind == "name":
        return ts.next().value
    ts.error(f"expected an atom, found {tok.value or 'end of input'!r}")


def atom_leaf(ts):
    return Inner(parse_atom(ts))


def parse_element(text, F, leaf=atom_leaf):
    ts = TokenStream(text)
    e = read_element(ts, F, leaf)
    ts.expect_eof()
    return e


def read_element(ts, F, leaf=atom_leaf):
    """Read one F-shaped element from the stream; leaf(ts) reads identity positions."""
    if isinstance(F, Identity):
        return leaf(ts)
    if isinstance(F, Constant):
        tok = ts.peek()
        if tok.kind != "const":
            _shape_error(ts, F, tok)
        if tok.value not in F.names:
            raise ElementTypeError(f"unknown constant {tok.value!r} for {F}", tok.pos, ts.text)
        ts.next()
        return ConstSym(tok.value, F.names.index(tok.value))
    if isinstance(F, FinPow):
        _expect_shape(ts, F, "{")
        return SetOf(ts.sep_list("}", lambda: leaf(ts)))
    if isinstance(F, FinBag):
        _expect_shape(ts, F, "bag")
        ts.expect("{")
        return BagOf(ts.sep_list("}", lambda: _weighted(ts, leaf, _count)))
    if isinstance(F, FinDist):
        _expect_shape(ts, F, "dist")
        ts.expect("{")
        start = ts.peek().pos
        pairs = ts.sep_list("}", lambda: _weighted(ts, leaf, _weight))
        try:
            return DistOf(pairs)
        except ValueError as exc:
            raise ParseError(str(exc), start, ts.text) from None
    if isinstance(F, Compose):
        return read_element(ts, F.outer, lambda t: read_element(t, F.inner, leaf))
    if isinstance(F, Sum):
        tok = ts.peek()
        if ts.accept("inl"):
            side = F.left
            wrap = Inl
        elif ts.accept("inr"):
            side = F.right
            wrap = Inr
        else:
            _shape_error(ts, F, tok)
        ts.expect("(")
        e = read_element(ts, side, leaf)
        ts.expect(")")
        return wrap(e)
    if isinstance(F, Product):
        return _read_product(ts, F, leaf)
    if isinstance(F, Exponent):
        return _read_map(ts, F, leaf)
    raise TypeError(f"not a functor expression: {F!r}")


def _shape_error(ts, F, tok):
    raise ElementTypeError(
        f"expected an element of {F}, found {tok.value or 'end of input'!r}", tok.pos, ts.text
    )


def _expect_shape(ts, F, opener):
    tok = ts.peek()
    if not ts.at(opener):
        _shape_error(ts, F, tok)
    ts.next()


def _count(ts):
    tok = ts.peek()
    if tok.kind != "name" or not tok.value.isdigit() or int(tok.value) == 0:
        ts.error("bag count must be a positive integer")
    return int(ts.next().value)


def _weight(ts):
    tok = ts.peek()
    if tok.kind != "name" or not tok.value.isdigit():
        ts.error("distribution weight must be p/q")
    num = int(ts.next().value)
    den = 1
    if ts.accept("/"):
        d = ts.peek()
        if d.kind != "name" or not d.value.isdigit() or int(d.value) == 0:
            ts.error("denominator must be a positive integer")
        den = int(ts.next().value)
    w = Fraction(num, den)
    if w <= 0:
        ts.error("distribution weight must be positive", tok.pos)
    return w


def _weighted(ts, leaf, amount):
    e = leaf(ts)
    ts.expect(":")
    return e, amount(ts)


def _read_product(ts, F, leaf):
    factors = product_leaves(F)
    start = ts.i
    _expect_shape(ts, F, "(")
    try:
        parts = [read_element(ts, factors[0], leaf)]
        for G in factors[1:]:
            ts.expect(",")
            parts.append(read_element(ts, G, leaf))
        ts.expect(")")
        return _rebuild(F, iter(parts))
    except ParseError:
        if len(factors) == 2:
            raise
    # nested form: (left, right) with each side written as its own tuple
    ts.i = start
    ts.expect("(")
    left = read_element(ts, F.left, leaf)
    ts.expect(",")
    right = read_element(ts, F.right, leaf)
    ts.expect(")")
    return PairOf(left, right)


def _rebuild(F, parts):
    if isinstance(F, Product):
        left = _rebuild(F.left, parts)
        return PairOf(left, _rebuild(F.right, parts))
    return next(parts)


def _read_map(ts, F, leaf):
    start = ts.peek().pos
    _expect_shape(ts, F, "[")
    seen = {}

    def entry():
        tok = ts.peek()
        name = ts.expect_name("exponent symbol")
        if name not in F.domain:
            raise ElementTypeError(f"{name!r} is not in the exponent domain", tok.pos, ts.text)
        if name in seen:
            raise ParseError(f"duplicate exponent symbol {name!r}", tok.pos, ts.text)
        ts.expect(":")
        seen[name] = read_element(ts, F.base, leaf)

    ts.sep_list("]", entry)
    missing = [d for d in F.domain if d not in seen]
    if missing:
        raise ElementTypeError(f"exponent map is missing {missing}", start, ts.text)
    return MapOf(F.domain, [seen[d] for d in F.domain])


# --- printing ------------------------------------------------------------------

def atom_text(x):
    return format_atom(x.value) if isinstance(x, Inner) else str(x)


def format_element(F, e, leaf=atom_text):
    """Canonical literal for e; leaf renders identity positions."""
    if isinstance(F, Identity):
        return leaf(e)
    if isinstance(F, Constant):
        return "'" + e.name
    if isinstance(F, FinPow):
        return "{" + ",".join(leaf(x) for x in e.items) + "}"
    if isinstance(F, FinBag):
        return "bag{" + ",".join(f"{leaf(x)}:{c}" for x, c in e.items) + "}"
    if isinstance(F, FinDist):
        return "dist{" + ",".join(f"{leaf(x)}:{w}" for x, w in e.items) + "}"
    if isinstance(F, Compose):
        return format_element(F.outer, e, lambda x: format_element(F.inner, x, leaf))
    if isinstance(F, Sum):
        if isinstance(e, Inl):
            return f"inl({format_element(F.left, e.item, leaf)})"
        return f"inr({format_element(F.right, e.item, leaf)})"
    if isinstance(F, Product):
        parts = []
        _flatten(F, e, leaf, parts)
        return "(" + ",".join(parts) + ")"
    if isinstance(F, Exponent):
        return "[" + ",".join(
            f"{d}:{format_element(F.base, x, leaf)}" for d, x in zip(F.domain, e.items)
        ) + "]"
    raise TypeError(f"not a functor expression: {F!r}")


def _flatten(F, e, leaf, out):
    if isinstance(F, Product):
        if not isinstance(e, PairOf):
            raise TypeMismatch(f"element {e!r} does not have shape {F}")
        _flatten(F.left, e.left, leaf, out)
        _flatten(F.right, e.right, leaf, out)
    else:
        out.append(format_element(F, e, leaf))
