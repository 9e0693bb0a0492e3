from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exotic4 import linalg
from exotic4.rbd import (
    ChainError,
    CpqLabel,
    PlumbingChain,
    blow_down_char_effect,
    chain_adjugate,
    chain_determinant,
    chain_matrix,
    cpq_chain,
    descends,
    format_chain,
    hj_expansion,
    hj_value,
    identify_cpq,
    is_characteristic,
    is_negative_definite,
    restriction_square,
)

CHAIN_305 = [-18, -19] + [-2] * 14 + [-3] + [-2] * 16


def cofactor_det(m):
    if not m:
        return 1
    return sum((-1) ** j * m[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(len(m)) if m[0][j])


def continued_fraction(coeffs):
    # outside-in with Fractions, independent of hj_value's recurrence
    if len(coeffs) == 1:
        return Fraction(coeffs[0])
    return coeffs[0] - 1 / continued_fraction(coeffs[1:])


chains = st.lists(st.integers(-9, -2), min_size=1, max_size=8).map(lambda c: PlumbingChain(tuple(c)))


# -- continued fractions ---------------------------------------------------

def test_hj_examples():
    assert hj_expansion(256, 15) == [18] + [2] * 14
    assert hj_expansion(3, 1) == [3]
    assert hj_expansion(4, 1) == [4]
    assert hj_expansion(93025, 5184) == [-c for c in CHAIN_305]


def test_hj_rejects_bad_input():
    for n, d in [(4, 2), (3, 3), (1, 1), (5, 0)]:
        with pytest.raises(ChainError):
            hj_expansion(n, d)


@given(st.integers(2, 3000), st.data())
def test_hj_round_trip(n, data):
    d = data.draw(st.integers(1, n - 1).filter(lambda d: gcd(n, d) == 1))
    coeffs = hj_expansion(n, d)
    assert all(c >= 2 for c in coeffs)
    assert hj_value(coeffs) == Fraction(n, d)
    assert continued_fraction(coeffs) == Fraction(n, d)


# -- C_{p,q} ---------------------------------------------------------------

def test_cpq_examples():
    assert cpq_chain(CpqLabel(2, 1)).coefficients == (-4,)
    assert cpq_chain(CpqLabel(3, 1)).coefficients == (-5, -2)
    assert list(cpq_chain(CpqLabel(16, 1))) == [-18] + [-2] * 14
    assert list(cpq_chain(CpqLabel(305, 17))) == CHAIN_305


def test_cpq_label_validation():
    for p, q in [(1, 0), (4, 2), (5, 5), (5, 0)]:
        with pytest.raises(ChainError):
            CpqLabel(p, q)


def test_identify():
    assert identify_cpq([-18] + [-2] * 14) == CpqLabel(16, 1)
    assert identify_cpq(CHAIN_305) == CpqLabel(305, 17)
    assert identify_cpq([-2]) is None
    assert identify_cpq([-3, -3]) is None  # 8/3


def test_format_chain():
    assert format_chain([-18] + [-2] * 14) == "-18 -2 ×14"
    assert format_chain([-4]) == "-4"
    assert str(PlumbingChain((-3, -2, -2, -5))) == "-3 -2 ×2 -5"


def test_chain_validation():
    with pytest.raises(ChainError):
        PlumbingChain(())
    with pytest.raises(ChainError):
        PlumbingChain((-2, -1))


def test_determinants():
    assert abs(chain_determinant(cpq_chain(CpqLabel(16, 1)))) == 256
    assert abs(chain_determinant(PlumbingChain(tuple(CHAIN_305)))) == 93025 == 305**2


def test_sweep_coprime_pairs_small():
    # the full p <= 400 sweep lives in the acceptance suite
    for p in range(2, 60):
        for q in range(1, p):
            if gcd(p, q) != 1:
                continue
            chain = cpq_chain(CpqLabel(p, q))
            assert identify_cpq(chain) == CpqLabel(p, q)
            assert abs(chain_determinant(chain)) == p * p
            assert is_negative_definite(chain)


@given(chains)
def test_determinant_matches_cofactor_oracle(chain):
    assert chain_determinant(chain) == cofactor_det(chain_matrix(chain))
    assert linalg.bareiss_det(chain_matrix(chain)) == cofactor_det(chain_matrix(chain))


@given(chains)
def test_chain_adjugate_matches_generic(chain):
    assert chain_adjugate(chain) == linalg.adjugate(chain_matrix(chain))


@given(chains)
def test_chain_adjugate_is_inverse(chain):
    det, adj = chain_adjugate(chain)
    m = chain_matrix(chain)
    k = len(chain)
    prod = [[sum(m[i][l] * adj[l][j] for l in range(k)) for j in range(k)] for i in range(k)]
    assert prod == [[det * (i == j) for j in range(k)] for i in range(k)]


@given(chains)
def test_chains_are_negative_definite(chain):
    # every entry <= -2 makes the form diagonally dominant
    assert is_negative_definite(chain)


def test_tridiagonal_minors():
    assert linalg.tridiagonal_minors([-1, -1]) == [-1, 0]
    assert linalg.tridiagonal_minors([-2, -2, -2]) == [-2, 3, -4]
    assert linalg.tridiagonal_minors([1, 1], [2]) == [1, -3]


# -- descent ---------------------------------------------------------------

def test_descends_c16():
    chain = cpq_chain(CpqLabel(16, 1))
    assert descends(chain, [16] + [0] * 14)
    assert descends(chain, [-16] + [0] * 14)
    assert not descends(chain, [0] * 15)
    assert not descends(chain, [18] + [0] * 14)


def test_descends_c2():
    chain = cpq_chain(CpqLabel(2, 1))
    assert descends(chain, [2]) and descends(chain, [-2])
    assert not descends(chain, [4]) and not descends(chain, [0])
    assert not descends(chain, [1])  # not characteristic


def test_descends_length_mismatch():
    with pytest.raises(ChainError):
        descends(cpq_chain(CpqLabel(2, 1)), [2, 0])


@given(chains, st.data())
def test_restriction_square_negation_invariant(chain, data):
    v = data.draw(st.lists(st.integers(-20, 20), min_size=len(chain), max_size=len(chain)))
    assert restriction_square(chain, v) == restriction_square(chain, [-x for x in v])
    assert descends(chain, v) == descends(chain, [-x for x in v])
    assert restriction_square(chain, v) <= 0


@given(chains, st.data())
def test_restriction_square_matches_adjugate(chain, data):
    v = data.draw(st.lists(st.integers(-20, 20), min_size=len(chain), max_size=len(chain)))
    det, adj = chain_adjugate(chain)
    k = len(chain)
    via_adj = Fraction(sum(v[i] * adj[i][j] * v[j] for i in range(k) for j in range(k)), det)
    assert restriction_square(chain, v) == via_adj


def test_is_characteristic():
    chain = PlumbingChain((-3, -2))
    assert is_characteristic(chain, [1, 0])
    assert not is_characteristic(chain, [0, 0])


def test_blow_down_effect():
    d = blow_down_char_effect(cpq_chain(CpqLabel(16, 1)))
    assert (d.de, d.dsigma, d.db2_plus, d.db2_minus) == (-15, 15, 0, -15)
    with pytest.raises(ChainError):
        blow_down_char_effect(PlumbingChain((-2,)))


# -- linalg ----------------------------------------------------------------

def test_solve_and_inverse():
    m = [[2, 1], [1, 3]]
    assert linalg.solve(m, [3, 4]) == [Fraction(1), Fraction(1)]
    inv = linalg.inverse(m)
    assert inv == [[Fraction(3, 5), Fraction(-1, 5)], [Fraction(-1, 5), Fraction(2, 5)]]
    with pytest.raises(ZeroDivisionError):
        linalg.solve([[1, 2], [2, 4]], [1, 1])


def test_bareiss_needs_pivoting():
    assert linalg.bareiss_det([[0, 1], [1, 0]]) == -1
    assert linalg.bareiss_det([[0, 0], [1, 0]]) == 0
    assert linalg.bareiss_det([]) == 1


@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_cofactor(m):
    assert linalg.bareiss_det(m) == cofactor_det(m)


def test_quadratic_form():
    m = [[-2, 1], [1, -2]]
    assert linalg.quadratic_form(m, [1, 1]) == -2
    assert linalg.quadratic_form(m, [1, 0], [0, 1]) == 1
