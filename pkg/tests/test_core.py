from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from nabla import (
    EnumerationLimit, Inl, Inner, Inr, NotFinitary, ParseError, TypeMismatch,
    base, canonical_compare, enumerate_elements, enumeration_size, fmap,
    format_element, parse_element, parse_functor, typecheck,
)
from nabla.elements import BagOf, DistOf
from oracles import powerset

FINITE = ["Id", "P", "Const(c,d)", "Const(c)*Id*Id", "P.P", "Id+Const(c)", "P^(d1,d2)",
          "(Id+P)*Const(c,d)", "P.(Id*Id)"]


def show(F, elems):
    return [format_element(F, e) for e in elems]


def test_powerset_order():
    P = parse_functor("P")
    assert show(P, enumerate_elements(P, ["a", "b"])) == ["{}", "{a}", "{b}", "{a,b}"]


def test_product_with_constants():
    F = parse_functor("Const(c,d) * Id")
    assert show(F, enumerate_elements(F, ["x"])) == ["('c,x)", "('d,x)"]


def test_second_level_of_powerset():
    F = parse_functor("P")
    level1 = enumerate_elements(F, ["*"])
    # independent oracle: subsets of the two subsets of {*}
    oracle = powerset([frozenset(), frozenset("*")])
    assert len(enumerate_elements(F, level1)) == len(oracle) == 4
    PP = parse_functor("P.P")
    assert show(PP, enumerate_elements(PP, ["*"])) == ["{}", "{{}}", "{{*}}", "{{},{*}}"]


@pytest.mark.parametrize("text", FINITE)
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_sizes_and_order(text, n):
    F = parse_functor(text)
    X = [f"x{i}" for i in range(n)]
    elems = enumerate_elements(F, X)
    assert len(elems) == enumeration_size(F, n)
    keys = [e.key for e in elems]
    assert all(a < b for a, b in zip(keys, keys[1:]))


def test_size_formulas():
    P = parse_functor("P")
    assert enumeration_size(P, 5) == 32
    assert enumeration_size(parse_functor("P^(a,b,c)"), 2) == 4 ** 3
    assert enumeration_size(parse_functor("P + Id"), 3) == 8 + 3
    assert enumeration_size(parse_functor("P * Id"), 3) == 24
    assert enumeration_size(parse_functor("P.P"), 2) == 2 ** 4


def test_bag_and_dist_not_finitary():
    for text in ["Bag", "P.Dist"]:
        with pytest.raises(NotFinitary):
            enumerate_elements(parse_functor(text), ["a"])


def test_enumeration_cap():
    with pytest.raises(EnumerationLimit):
        enumerate_elements(parse_functor("P"), range(30), limit=1000)
    with pytest.raises(EnumerationLimit):
        enumerate_elements(parse_functor("P.P.P.P"), ["a", "b"])


def test_env_cap(monkeypatch):
    monkeypatch.setenv("NABLA_MAX_ENUM", "10")
    with pytest.raises(EnumerationLimit):
        enumerate_elements(parse_functor("P"), ["a", "b", "c", "d"])


def test_fmap_bag_sums_counts():
    B = parse_functor("Bag")
    e = parse_element("bag{x:2, y:1}", B)
    assert format_element(B, fmap(B, {"x": "z", "y": "z"}, e)) == "bag{z:3}"


def test_fmap_dist_sums_weights():
    D = parse_functor("Dist")
    e = parse_element("dist{x:1/3, y:1/6, w:1/2}", D)
    out = fmap(D, {"x": "z", "y": "z", "w": "v"}, e)
    assert out.items == ((Inner("v"), Fraction(1, 2)), (Inner("z"), Fraction(1, 2)))


def test_fmap_direct_image():
    P = parse_functor("P")
    assert format_element(P, fmap(P, {"1": "a", "2": "a"}, parse_element("{1,2}", P))) == "{a}"


def test_fmap_type_mismatch():
    with pytest.raises(TypeMismatch):
        fmap(parse_functor("P"), lambda x: x, parse_element("inl(a)", parse_functor("Id+Id")))


@pytest.mark.parametrize("text", FINITE)
def test_functor_laws(text):
    F = parse_functor(text)
    X = ["a", "b", "c"]
    maps = [dict(zip(X, img)) for img in product(X, repeat=3)]
    for e in enumerate_elements(F, X, limit=5000)[:200]:
        assert fmap(F, lambda x: x, e) == e
        for f in maps[::5]:
            for g in maps[::7]:
                assert fmap(F, lambda x: g[f[x]], e) == fmap(F, g, fmap(F, f, e))


def test_base_examples():
    F = parse_functor("Const(c)*Id*Id")
    assert base(F, parse_element("('c,x1,x2)", F)) == {"x1", "x2"}
    P = parse_functor("P")
    assert base(P, parse_element("{a,b}", P)) == {"a", "b"}
    D = parse_functor("Dist")
    assert base(D, parse_element("dist{a:1/3, b:2/3}", D)) == {"a", "b"}
    assert base(parse_functor("Const(c)"), parse_element("'c", parse_functor("Const(c)"))) == set()


@pytest.mark.parametrize("text", FINITE)
def test_base_minimal_and_natural(text):
    F = parse_functor(text)
    X = ["a", "b", "c"]
    elems = enumerate_elements(F, X, limit=5000)
    for e in elems[:300]:
        B = base(F, e)
        assert e in set(enumerate_elements(F, B, limit=5000))
        for Y in powerset(B):
            if Y != B:
                assert e not in set(enumerate_elements(F, Y, limit=5000))
        for img in [("a", "a", "b"), ("c", "b", "c")]:
            f = dict(zip(X, img))
            assert {f[x] for x in B} == base(F, fmap(F, f, e))


def test_canonical_compare():
    P = parse_functor("P")
    assert canonical_compare(parse_element("{}", P), parse_element("{a}", P)) == -1
    F = parse_functor("Const(c)*Id")
    e = parse_element("('c,x)", F)
    assert canonical_compare(e, parse_element("('c,x)", F)) == 0
    assert canonical_compare(Inl(Inner("x")), Inr(Inner("x"))) == -1
    C = parse_functor("Const(z,a)")
    # constants follow declaration order, not alphabetical order
    assert show(C, enumerate_elements(C, [])) == ["'z", "'a"]


LITERALS = [
    ("P", "{b,a,a}", "{a,b}"),
    ("Bag", "bag{b:1, a:2, b:2}", "bag{a:2,b:3}"),
    ("Dist", "dist{a:1/2, b:2/4}", "dist{a:1/2,b:1/2}"),
    ("Const(c)*Id*Id", "('c, x, y)", "('c,x,y)"),
    ("Const(c)*Id*Id", "(('c, x), y)", "('c,x,y)"),
    ("Const(c)*(Id*Id)", "('c, (x, y))", "('c,x,y)"),
    ("Id+P", "inr({a})", "inr({a})"),
    ("P^(d1,d2)", "[d2:{}, d1:{a}]", "[d1:{a},d2:{}]"),
    ("P.P", "{{a},{}}", "{{},{a}}"),
    ("Bag.P", "bag{{a}:1}", "bag{{a}:1}"),
]


@pytest.mark.parametrize("F,text,canon", LITERALS)
def test_literal_canonical_form(F, text, canon):
    F = parse_functor(F)
    e = parse_element(text, F)
    assert format_element(F, e) == canon
    assert parse_element(canon, F) == e


@pytest.mark.parametrize("F,text", [
    ("P", "(a,b)"), ("Dist", "dist{a:1/2}"), ("Bag", "bag{a:0}"), ("Const(c)", "'d"),
    ("P^(d1,d2)", "[d1:{}]"), ("P^(d1)", "[d1:{},d1:{}]"), ("Id*Id", "(a,b,c)"), ("P", "{a"),
])
def test_literal_errors(F, text):
    with pytest.raises(ParseError):
        parse_element(text, parse_functor(F))


def test_bag_positive_graph():
    assert BagOf([(Inner("a"), 0), (Inner("b"), 1)]).items == ((Inner("b"), 1),)
    with pytest.raises(ValueError):
        DistOf([(Inner("a"), Fraction(1, 3))])


def test_typecheck_carrier():
    P = parse_functor("P")
    from nabla import CarrierMismatch
    with pytest.raises(CarrierMismatch):
        typecheck(P, parse_element("{a,z}", P), ["a", "b"])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FINITE), st.integers(1, 3), st.data())
def test_literal_roundtrip(text, n, data):
    F = parse_functor(text)
    elems = enumerate_elements(F, [f"x{i}" for i in range(n)], limit=5000)
    e = data.draw(st.sampled_from(elems))
    assert parse_element(format_element(F, e), F) == e
