from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exotic4.laurent import LaurentPoly

VARS = ("x", "y")
exps = st.tuples(st.integers(-4, 4), st.integers(-4, 4))
polys = st.dictionaries(exps, st.integers(-5, 5), max_size=6).map(lambda d: LaurentPoly(VARS, d))
points = st.fixed_dictionaries({"x": st.sampled_from([1, 2, 3, -1, Fraction(1, 2)]),
                                "y": st.sampled_from([1, -2, 5, Fraction(2, 3)])})


def test_zero_terms_dropped():
    p = LaurentPoly(("x",), {(1,): 2, (0,): 0})
    assert len(p) == 1
    assert LaurentPoly(("x",), [((1,), 1), ((1,), -1)]) == 0


def test_validation():
    with pytest.raises(ValueError):
        LaurentPoly(("x", "x"))
    with pytest.raises(ValueError):
        LaurentPoly(("x",), {(1, 2): 1})
    with pytest.raises(AttributeError):
        LaurentPoly(("x",)).variables = ("y",)
    with pytest.raises(ValueError):
        LaurentPoly(("x",), {(1,): 1}) ** -1


def test_mixed_variables():
    x = LaurentPoly.monomial({"x": 1})
    y = LaurentPoly.monomial({"y": -1})
    p = x * y + 3
    assert p.variables == ("x", "y")
    assert p.coefficient({"x": 1, "y": -1}) == 1
    assert p.coefficient({"x": 0, "y": 0}) == 3
    assert p.support_variables() == ("x", "y")
    assert (p - x * y).support_variables() == ()


def test_binomial_power():
    p = LaurentPoly(("x",), {(1,): 1, (-1,): -1}) ** 3
    assert dict(p.items()) == {(-3,): -1, (-1,): 3, (1,): -3, (3,): 1}
    assert p.symmetry_sign() == -1


def test_substitute_power():
    t = LaurentPoly(("t",), {(1,): 2, (0,): -3, (-1,): 2})
    p = t.substitute_power("t", "T", 2)
    assert dict(p.items()) == {(-2,): 2, (0,): -3, (2,): 2}
    q = LaurentPoly(("t", "T"), {(1, 1): 1}).substitute_power("t", "T", 2)
    assert dict(q.items()) == {(3,): 1}


def test_str():
    assert str(LaurentPoly(("x",))) == "0"
    assert "x^-1" in str(LaurentPoly(("x",), {(-1,): 1}))


def test_hash_ignores_unused_variables():
    a = LaurentPoly(("x",), {(1,): 1})
    b = LaurentPoly(("x", "y"), {(1, 0): 1})
    assert a == b and hash(a) == hash(b)


def test_pairs_round_trip():
    p = LaurentPoly(VARS, {(1, -2): 4, (0, 0): -1})
    assert LaurentPoly.from_pairs(VARS, p.to_pairs()) == p


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == 0
    assert p * 1 == p


@given(polys, polys, points)
def test_evaluation_is_ring_map(p, q, pt):
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)


@given(polys, st.integers(0, 3))
def test_power_is_repeated_product(p, k):
    out = LaurentPoly.constant(1, VARS)
    for _ in range(k):
        out = out * p
    assert p**k == out


@given(polys)
def test_negate_exponents_involution(p):
    assert p.negate_exponents().negate_exponents() == p
    s = (p + p.negate_exponents()).symmetry_sign()
    assert s == 1
