"""The finitary cover-modality language: formulas, parsing, printing.

Grammar::

    a ::= ~a | /\\{a,...} | \\/{a,...} | T | F | nab <element> | name

``T`` and ``F`` are the empty conjunction and disjunction.  A bare ``name``
is a proposition letter (when letters are encoded into the functor), a
one-step variable (when a set of variables is supplied), and otherwise an
error.  ``dia a`` and ``box a`` abbreviate the usual Kripke modalities when
the functor is ``P`` or a proposition-wrapped ``P``.
"""
from .core import base, enumerate_elements, iter_leaves, map_leaves
from .elements import ConstSym, Inner, PairOf, SetOf
from .errors import NablaError, ParseError
from .functors import Constant, FinPow, Product, tag_props
from .lexer import TokenStream
from .literals import format_element, read_element


class Formula:
    __slots__ = ("key", "_hash")

    def __eq__(self, other):
        return isinstance(other, Formula) and (self is other or self.key == other.key)

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

    def __str__(self):
        return print_formula(self)

    def __repr__(self):
        return f"Formula<{print_formula(self)}>"


class Var(Formula):
    """A depth-0 variable standing for a subset of a one-step carrier."""

    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name
        self.key = (0, name)
        self._hash = hash(self.key)


class Neg(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg
        self.key = (1, arg.key)
        self._hash = hash((1, arg._hash))


def _canon(items):
    seen = {}
    for a in items:
        if not isinstance(a, Formula):
            raise TypeError(f"not a formula: {a!r}")
        seen.setdefault(a, a)
    return tuple(sorted(seen, key=lambda a: a.key))


class Conj(Formula):
    __slots__ = ("items",)

    def __init__(self, items=()):
        self.items = _canon(items)
        self.key = (2, len(self.items), tuple(a.key for a in self.items))
        self._hash = hash((2, tuple(a._hash for a in self.items)))


class Disj(Formula):
    __slots__ = ("items",)

    def __init__(self, items=()):
        self.items = _canon(items)
        self.key = (3, len(self.items), tuple(a.key for a in self.items))
        self._hash = hash((3, tuple(a._hash for a in self.items)))


class Nabla(Formula):
    """Cover modality; ``arg`` is an element of ``functor`` over formulas."""

    __slots__ = ("arg", "functor")

    def __init__(self, arg, functor):
        self.arg = arg
        self.functor = functor
        for leaf in iter_leaves(functor, arg):
            if not isinstance(leaf, Inner) or not isinstance(leaf.value, Formula):
                raise TypeError("nabla argument must hold formulas at identity positions")
        self.key = (4, arg.key)
        self._hash = hash((4, arg._hash))

    def members(self):
        """Base of the argument: the immediate subformulas."""
        return base(self.functor, self.arg)


TOP = Conj()
BOT = Disj()


def nabla_of(F, elem):
    """Nabla from an element over raw formulas (identity leaves hold formulas)."""
    return Nabla(elem, F)


def depth(a):
    if isinstance(a, Var):
        return 0
    if isinstance(a, Neg):
        return depth(a.arg)
    if isinstance(a, (Conj, Disj)):
        return max((depth(b) for b in a.items), default=0)
    if isinstance(a, Nabla):
        return 1 + max((depth(b) for b in a.members()), default=0)
    raise TypeError(f"not a formula: {a!r}")


def children(a):
    if isinstance(a, Neg):
        return [a.arg]
    if isinstance(a, (Conj, Disj)):
        return list(a.items)
    if isinstance(a, Nabla):
        return sorted(a.members(), key=lambda b: b.key)
    return []


def subformulas(a):
    out = set()
    stack = [a]
    while stack:
        b = stack.pop()
        if b in out:
            continue
        out.add(b)
        stack.extend(children(b))
    return frozenset(out)


def postorder(a):
    """Distinct subformulas, each listed after all of its own subformulas."""
    order, done = [], set()
    stack = [(a, False)]
    while stack:
        b, expanded = stack.pop()
        if b in done:
            continue
        if expanded:
            done.add(b)
            order.append(b)
            continue
        stack.append((b, True))
        stack.extend((c, False) for c in children(b) if c not in done)
    return order


def variables_of(a):
    return frozenset(b.name for b in subformulas(a) if isinstance(b, Var))


# --- printing --------------------------------------------------------------------

def _leaf_text(x):
    return print_formula(x.value)


def print_formula(a):
    if isinstance(a, Var):
        return a.name
    if isinstance(a, Neg):
        return "~" + print_formula(a.arg)
    if isinstance(a, Conj):
        return "/\\{" + ",".join(map(print_formula, a.items)) + "}" if a.items else "T"
    if isinstance(a, Disj):
        return "\\/{" + ",".join(map(print_formula, a.items)) + "}" if a.items else "F"
    if isinstance(a, Nabla):
        return "nab " + format_element(a.functor, a.arg, _leaf_text)
    raise TypeError(f"not a formula: {a!r}")


# --- proposition-letter and modal sugar ---------------------------------------------

def split_props(F):
    """(tags, G) when F = Const(tags) * G, else (None, F)."""
    if isinstance(F, Product) and isinstance(F.left, Constant):
        return F.left, F.right
    return None, F


def prop_formula(F, letter):
    """Letter p as the disjunction of nabla formulas whose tag contains p."""
    tags, G = split_props(F)
    if tags is None:
        raise NablaError("functor carries no proposition letters")
    shapes = enumerate_elements(F, [TOP])
    chosen = [Nabla(e, F) for e in shapes if letter in tag_props(e.left.name)]
    return Disj(chosen)


def props_nabla(F, inner_elem):
    """Nabla over the unwrapped functor: disjunction over every tag."""
    tags, G = split_props(F)
    if tags is None:
        return Nabla(inner_elem, F)
    return Disj([Nabla(PairOf(ConstSym(t, i), inner_elem), F) for i, t in enumerate(tags.names)])


def _kripke_base(F):
    tags, G = split_props(F)
    if not isinstance(G, FinPow):
        raise NablaError("dia/box need the functor P, optionally proposition-wrapped")
    return G


def _set(items):
    return SetOf([Inner(a) for a in items])


def diamond(F, a):
    _kripke_base(F)
    return props_nabla(F, _set([a, TOP]))


def box(F, a):
    _kripke_base(F)
    return Disj([props_nabla(F, _set([])), props_nabla(F, _set([a]))])


# --- parsing -------------------------------------------------------------------------

_KEYWORDS = {"T", "F", "nab", "dia", "box"}


class FormulaParser:
    def __init__(self, F, props=(), variables=(), free_variables=False):
        self.F = F
        self.props = frozenset(props)
        self.variables = frozenset(variables)
        self.free_variables = free_variables
        clash = self.variables & (_KEYWORDS | self.props)
        if clash:
            raise NablaError(f"variable names clash with keywords or letters: {sorted(clash)}")
        if self.props:
            tags, _ = split_props(F)
            if tags is None:
                raise NablaError("proposition letters need a proposition-wrapped functor")
        self._prop_cache = {}

    def formula(self, ts):
        tok = ts.peek()
        if ts.accept("~"):
            return Neg(self.formula(ts))
        if ts.accept("/\\"):
            ts.expect("{")
            return Conj(ts.sep_list("}", lambda: self.formula(ts)))
        if ts.accept("\\/"):
            ts.expect("{")
            return Disj(ts.sep_list("}", lambda: self.formula(ts)))
        if tok.kind != "name":
            ts.error(f"expected a formula, found {tok.value or 'end of input'!r}")
        ts.next()
        name = tok.value
        if name == "T":
            return TOP
        if name == "F":
            return BOT
        if name == "nab":
            elem = read_element(ts, self.F, lambda t: Inner(self.formula(t)))
            return Nabla(elem, self.F)
        if name in ("dia", "box"):
            try:
                return (diamond if name == "dia" else box)(self.F, self.formula(ts))
            except NablaError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(str(exc), tok.pos, ts.text) from None
        if name in self.props:
            if name not in self._prop_cache:
                self._prop_cache[name] = prop_formula(self.F, name)
            return self._prop_cache[name]
        if name in self.variables or (self.free_variables and name not in _KEYWORDS):
            return Var(name)
        raise ParseError(f"unknown proposition letter or variable {name!r}", tok.pos, ts.text)


def parse_formula(text, F, props=(), variables=()):
    ts = TokenStream(text)
    a = FormulaParser(F, props, variables).formula(ts)
    ts.expect_eof()
    return a


def parse_inequality(text, F, props=(), variables=()):
    """Parse ``a <= b`` into a pair of formulas."""
    ts = TokenStream(text)
    p = FormulaParser(F, props, variables)
    a = p.formula(ts)
    ts.expect("<=")
    b = p.formula(ts)
    ts.expect_eof()
    return a, b


def map_formula_leaves(F, elem, fn):
    """Apply fn to every formula at an identity position of elem."""
    return map_leaves(F, elem, lambda x: Inner(fn(x.value)))
