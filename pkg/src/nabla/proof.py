"""Derivation trees for the nabla proof system and their checker.

Supported rules (name, premises => conclusion):

    refl    -                                    a <= a
    cut     a <= b, b <= c                       a <= c
    or-l    {a <= b | a in phi}                  \\/phi <= b
    or-r    a <= b            (b in psi)         a <= \\/psi
    and-r   {a <= b | b in psi}                  a <= /\\psi
    and-l   a <= b            (a in phi)         /\\phi <= b
    dist    -                                    /\\{\\/phi | phi in X} <= \\/{/\\g[X] | g choice}
    neg-r   /\\(X + {~a}) <= \\/Y                  /\\X <= \\/(Y + {a})
    neg-l   /\\(X + {a}) <= \\/Y                   /\\X <= \\/(Y + {~a})
    nab1    {a <= b | (a,b) in Z}  ((alpha,beta) in lifted Z)   nab alpha <= nab beta
    nab2    {nab (F/\\)Phi <= b | Phi in SRD(A)}  /\\{nab alpha | alpha in A} <= b
    nab3    {nab beta <= b | beta lifted member of Phi}      nab (F\\/)Phi <= b
    nab2f   axiom form of nab2 (functors preserving finite sets)
    nab3f   axiom form of nab3 (functors preserving finite sets)
    oracle  -   any inequality between formulas of depth <= 1 that holds
                at level 1 of the final sequence

Failure reasons reported by :func:`check_derivation`:

    unknown-rule, malformed, conclusion-shape, missing-premise,
    extra-premise, duplicate-premise, side-condition, not-finitary
"""
from dataclasses import dataclass, field
from itertools import product as cartesian

from .core import base, fmap
from .elements import Inner
from .errors import DerivationError, NablaError, NotEnumerable, ParseError
from .functors import parse_functor, preserves_finite, with_props
from .lexer import TokenStream
from .lifting import lift, lifted_members
from .literals import format_element, read_element
from .onestep import slim_redistributions
from .semantics import decide_valid
from .syntax import (
    Conj, Disj, FormulaParser, Nabla, Neg, depth, postorder, print_formula,
)


@dataclass(frozen=True)
class Inequality:
    lhs: object
    rhs: object

    def __str__(self):
        return f"{print_formula(self.lhs)} <= {print_formula(self.rhs)}"


@dataclass
class Derivation:
    conclusion: Inequality
    rule: str
    side: object = None
    premises: list = field(default_factory=list)


@dataclass
class CheckResult:
    ok: bool
    path: list = None
    reason: str = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "OK"
        where = "/".join(map(str, self.path)) or "<root>"
        return f"FAIL {self.reason} at node {where}: {self.detail}"


# --- checking ----------------------------------------------------------------------------

class _Fail(Exception):
    def __init__(self, reason, detail):
        self.reason = reason
        self.detail = detail


def check_derivation(d, F, limit=None):
    """Validate every node, children before parents, left to right."""
    try:
        _walk(d, F, [], limit)
    except DerivationError as exc:
        return CheckResult(False, exc.path, exc.reason, exc.detail)
    return CheckResult(True, [])


def verify(d, F, limit=None):
    """Like check_derivation but raise DerivationError on failure."""
    res = check_derivation(d, F, limit)
    if not res:
        raise DerivationError(res.path, res.reason, res.detail)


def _walk(d, F, path, limit):
    for i, p in enumerate(d.premises):
        _walk(p, F, path + [i], limit)
    rule = RULES.get(d.rule)
    if rule is None:
        raise DerivationError(path, "unknown-rule", f"no rule named {d.rule!r}")
    try:
        _check_typed(d, F)
        rule(d, F, limit)
    except _Fail as exc:
        raise DerivationError(path, exc.reason, exc.detail) from None
    except NotEnumerable as exc:
        raise DerivationError(path, "not-finitary", str(exc)) from None
    except NablaError as exc:
        raise DerivationError(path, "malformed", str(exc)) from None


def _check_typed(d, F):
    for side in (d.conclusion.lhs, d.conclusion.rhs):
        for b in postorder(side):
            if isinstance(b, Nabla) and b.functor != F:
                raise _Fail("malformed", f"nabla over {b.functor}, expected {F}")


def _no_premises(d):
    if d.premises:
        raise _Fail("extra-premise", f"rule {d.rule} takes no premises")


def _no_side(d):
    if d.side is not None:
        raise _Fail("malformed", f"rule {d.rule} takes no side data")


def _exact_premises(d, required):
    given = [p.conclusion for p in d.premises]
    seen = set()
    for g in given:
        if g in seen:
            raise _Fail("duplicate-premise", f"premise {g} occurs twice")
        seen.add(g)
    required = set(required)
    missing = sorted(map(str, required - seen))
    if missing:
        raise _Fail("missing-premise", f"missing {missing[0]}"
                    + (f" and {len(missing) - 1} more" if len(missing) > 1 else ""))
    extra = [str(g) for g in given if g not in required]
    if extra:
        raise _Fail("extra-premise", f"unexpected premise {extra[0]}")


def _shape(cond, detail):
    if not cond:
        raise _Fail("conclusion-shape", detail)


def _refl(d, F, limit):
    _no_premises(d)
    _no_side(d)
    c = d.conclusion
    _shape(c.lhs == c.rhs, "reflexivity needs identical sides")


def _cut(d, F, limit):
    _no_side(d)
    if len(d.premises) != 2:
        raise _Fail("missing-premise" if len(d.premises) < 2 else "extra-premise",
                    "cut takes exactly two premises")
    p, q = (x.conclusion for x in d.premises)
    c = d.conclusion
    if p.lhs != c.lhs or q.rhs != c.rhs:
        raise _Fail("conclusion-shape", "cut premises do not match the conclusion")
    if p.rhs != q.lhs:
        raise _Fail("side-condition", "cut formulas of the two premises differ")


def _or_l(d, F, limit):
    _no_side(d)
    c = d.conclusion
    _shape(isinstance(c.lhs, Disj), "or-l needs a disjunction on the left")
    _exact_premises(d, [Inequality(a, c.rhs) for a in c.lhs.items])


def _and_r(d, F, limit):
    _no_side(d)
    c = d.conclusion
    _shape(isinstance(c.rhs, Conj), "and-r needs a conjunction on the right")
    _exact_premises(d, [Inequality(c.lhs, b) for b in c.rhs.items])


def _single(d):
    if len(d.premises) != 1:
        raise _Fail("missing-premise" if not d.premises else "extra-premise",
                    f"rule {d.rule} takes exactly one premise")
    return d.premises[0].conclusion


def _or_r(d, F, limit):
    _no_side(d)
    c = d.conclusion
    _shape(isinstance(c.rhs, Disj), "or-r needs a disjunction on the right")
    p = _single(d)
    if p.lhs != c.lhs:
        raise _Fail("conclusion-shape", "premise and conclusion have different left sides")
    if p.rhs not in c.rhs.items:
        raise _Fail("side-condition", f"{print_formula(p.rhs)} is not a disjunct")


def _and_l(d, F, limit):
    _no_side(d)
    c = d.conclusion
    _shape(isinstance(c.lhs, Conj), "and-l needs a conjunction on the left")
    p = _single(d)
    if p.rhs != c.rhs:
        raise _Fail("conclusion-shape", "premise and conclusion have different right sides")
    if p.lhs not in c.lhs.items:
        raise _Fail("side-condition", f"{print_formula(p.lhs)} is not a conjunct")


def _dist(d, F, limit):
    _no_premises(d)
    _no_side(d)
    c = d.conclusion
    _shape(isinstance(c.lhs, Conj) and all(isinstance(x, Disj) for x in c.lhs.items),
           "dist needs a conjunction of disjunctions on the left")
    expected = Disj(Conj(choice) for choice in cartesian(*[x.items for x in c.lhs.items]))
    _shape(c.rhs == expected, "right side is not the disjunction over all choices")


def _neg_rule(d, F, limit, negate_on_left):
    _no_side(d)
    c = d.conclusion
    _shape(isinstance(c.lhs, Conj) and isinstance(c.rhs, Disj),
           f"{d.rule} needs a conjunction left and a disjunction right")
    p = _single(d)
    if not (isinstance(p.lhs, Conj) and isinstance(p.rhs, Disj)):
        raise _Fail("conclusion-shape", "premise must be a conjunction below a disjunction")
    X, Y = c.lhs.items, p.rhs.items
    for moved in c.rhs.items:
        if negate_on_left:
            # premise /\(X + {~a}), conclusion \/(Y + {a})
            added = Neg(moved)
        elif isinstance(moved, Neg):
            # premise /\(X + {a}), conclusion \/(Y + {~a})
            added = moved.arg
        else:
            continue
        if Conj(X + (added,)) == p.lhs and Disj(Y + (moved,)) == c.rhs:
            return
    raise _Fail("side-condition", f"premise is not an instance of {d.rule} for this conclusion")


def _neg_r(d, F, limit):
    _neg_rule(d, F, limit, True)


def _neg_l(d, F, limit):
    _neg_rule(d, F, limit, False)


def _nab1(d, F, limit):
    c = d.conclusion
    _shape(isinstance(c.lhs, Nabla) and isinstance(c.rhs, Nabla),
           "nab1 needs nabla formulas on both sides")
    alpha, beta = c.lhs.arg, c.rhs.arg
    if d.side is None:
        Z = {(p.conclusion.lhs, p.conclusion.rhs) for p in d.premises}
    else:
        Z = set(d.side)
    ba, bb = base(F, alpha), base(F, beta)
    outside = [(a, b) for a, b in Z if a not in ba or b not in bb]
    if outside:
        a, b = outside[0]
        raise _Fail("side-condition", f"pair ({a}, {b}) is not within the bases")
    holds = lift(F, alpha, beta, lambda x, y: (x.value, y.value) in Z)
    if not holds:
        raise _Fail("side-condition", "arguments are not related by the lifting of Z")
    _exact_premises(d, [Inequality(a, b) for a, b in Z])


def _nabla_conj(c):
    _shape(isinstance(c.lhs, Conj) and all(isinstance(x, Nabla) for x in c.lhs.items),
           "left side must be a conjunction of nabla formulas")
    return [x.arg for x in c.lhs.items]


def _srd_side(d, F, c):
    A = _nabla_conj(c)
    if d.side is not None:
        given = sorted(set(d.side), key=lambda e: e.key)
        if given != sorted(set(A), key=lambda e: e.key):
            raise _Fail("side-condition", "side data A does not match the left side")
    return A


def _conj_image(F, phi):
    return Nabla(fmap(F, Conj, phi), F)


def _nab2(d, F, limit):
    c = d.conclusion
    A = _srd_side(d, F, c)
    srd = slim_redistributions(F, A, limit)
    _exact_premises(d, [Inequality(_conj_image(F, phi), c.rhs) for phi in srd])


def _nab2f(d, F, limit):
    _require_finite(F)
    _no_premises(d)
    c = d.conclusion
    A = _srd_side(d, F, c)
    srd = slim_redistributions(F, A, limit)
    expected = Disj(_conj_image(F, phi) for phi in srd)
    _shape(c.rhs == expected, "right side is not the disjunction over slim redistributions")


def _require_finite(F):
    if not preserves_finite(F):
        raise _Fail("not-finitary", f"axiom needs a functor preserving finite sets, got {F}")


def _phi_side(d, F, lhs):
    _shape(isinstance(lhs, Nabla), "left side must be a nabla formula")
    if d.side is not None:
        phi = d.side
        if fmap(F, Disj, phi) != lhs.arg:
            raise _Fail("side-condition", "nabla argument is not the disjunction image of Phi")
        return phi
    members = base(F, lhs.arg)
    if not all(isinstance(m, Disj) for m in members):
        raise _Fail("malformed", "Phi cannot be inferred; give Phi=<element>")
    return fmap(F, lambda m: frozenset(m.items), lhs.arg)


def _members_of(F, phi, limit):
    X = frozenset().union(*base(F, phi))
    return lifted_members(F, X, phi, limit)


def _nab3(d, F, limit):
    c = d.conclusion
    phi = _phi_side(d, F, c.lhs)
    members = _members_of(F, phi, limit)
    _exact_premises(d, [Inequality(Nabla(beta, F), c.rhs) for beta in members])


def _nab3f(d, F, limit):
    _require_finite(F)
    _no_premises(d)
    c = d.conclusion
    phi = _phi_side(d, F, c.lhs)
    expected = Disj(Nabla(beta, F) for beta in _members_of(F, phi, limit))
    _shape(c.rhs == expected, "right side is not the disjunction over lifted members")


def _oracle(d, F, limit):
    _no_premises(d)
    _no_side(d)
    c = d.conclusion
    if max(depth(c.lhs), depth(c.rhs)) > 1:
        raise _Fail("side-condition", "oracle leaves are limited to depth 1")
    _require_finite(F)
    if not decide_valid(F, c.lhs, c.rhs, limit).valid:
        raise _Fail("side-condition", "inequality fails at level 1 of the final sequence")


RULES = {
    "refl": _refl,
    "cut": _cut,
    "or-l": _or_l,
    "or-r": _or_r,
    "and-r": _and_r,
    "and-l": _and_l,
    "dist": _dist,
    "neg-r": _neg_r,
    "neg-l": _neg_l,
    "nab1": _nab1,
    "nab2": _nab2,
    "nab3": _nab3,
    "nab2f": _nab2f,
    "nab3f": _nab3f,
    "oracle": _oracle,
}


# --- proof files ------------------------------------------------------------------------------

@dataclass
class ProofFile:
    functor: object
    props: tuple
    root: Derivation


def parse_proof(text, F=None, props=()):
    """Parse an indented proof; header lines ``functor:``/``props:`` set the functor."""
    nodes = []
    header_F = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        stripped = raw.strip()
        if stripped.startswith("functor:"):
            header_F = stripped[len("functor:"):].strip()
            continue
        if stripped.startswith("props:"):
            props = tuple(stripped[len("props:"):].replace(",", " ").split())
            continue
        indent = len(raw) - len(raw.lstrip(" "))
        if indent % 2:
            raise ParseError(f"line {lineno}: indentation must be a multiple of two spaces")
        nodes.append((lineno, indent // 2, stripped))
    if header_F is not None:
        F = parse_functor(header_F)
        if props:
            F = with_props(F, props)
    if F is None:
        raise ParseError("no functor given (use a 'functor:' header line)")
    if not nodes:
        raise ParseError("proof is empty")
    parser = FormulaParser(F, props)
    stack = []
    root = None
    for lineno, level, line in nodes:
        d = _parse_node(line, lineno, F, parser)
        if level == 0:
            if root is not None:
                raise ParseError(f"line {lineno}: a proof has a single root")
            root = d
            stack = [d]
            continue
        if level > len(stack):
            raise ParseError(f"line {lineno}: indentation jumps by more than one level")
        del stack[level:]
        stack[-1].premises.append(d)
        stack.append(d)
    return ProofFile(F, tuple(props), root)


def _parse_node(line, lineno, F, parser):
    parts = [p.strip() for p in line.split("|")]
    if len(parts) not in (2, 3):
        raise ParseError(f"line {lineno}: expected '<rule> | <lhs> <= <rhs> [| <side data>]'")
    rule = parts[0]
    ts = TokenStream(parts[1])
    try:
        lhs = parser.formula(ts)
        ts.expect("<=")
        rhs = parser.formula(ts)
        ts.expect_eof()
    except ParseError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None
    side = None
    if len(parts) == 3 and parts[2]:
        try:
            side = parse_side(parts[2], F, parser)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return Derivation(Inequality(lhs, rhs), rule, side, [])


def parse_side(text, F, parser):
    ts = TokenStream(text)
    label = ts.expect_name("side-data label")
    ts.expect("=")
    if label == "Z":
        ts.expect("{")

        def pair():
            ts.expect("(")
            a = parser.formula(ts)
            ts.expect(",")
            b = parser.formula(ts)
            ts.expect(")")
            return (a, b)

        value = frozenset(ts.sep_list("}", pair))
    elif label == "A":
        ts.expect("{")
        leaf = lambda t: Inner(parser.formula(t))
        value = tuple(ts.sep_list("}", lambda: read_element(ts, F, leaf)))
    elif label == "Phi":
        def formula_set(t):
            t.expect("{")
            return Inner(frozenset(t.sep_list("}", lambda: parser.formula(t))))
        value = read_element(ts, F, formula_set)
    else:
        ts.error(f"unknown side-data label {label!r}")
    ts.expect_eof()
    return value


def format_side(rule, side, F):
    if side is None:
        return None
    if rule == "nab1":
        pairs = sorted(side, key=lambda p: (p[0].key, p[1].key))
        return "Z={" + ",".join(f"({print_formula(a)},{print_formula(b)})" for a, b in pairs) + "}"
    if rule in ("nab2", "nab2f"):
        elems = sorted(set(side), key=lambda e: e.key)
        return "A={" + ",".join(
            format_element(F, e, lambda x: print_formula(x.value)) for e in elems) + "}"
    return "Phi=" + format_element(
        F, side,
        lambda x: "{" + ",".join(print_formula(b) for b in sorted(x.value, key=lambda b: b.key)) + "}",
    )


def format_proof(d, F, indent=0):
    side = format_side(d.rule, d.side, F)
    line = "  " * indent + f"{d.rule} | {d.conclusion}"
    if side:
        line += f" | {side}"
    return "\n".join([line] + [format_proof(p, F, indent + 1) for p in d.premises])
