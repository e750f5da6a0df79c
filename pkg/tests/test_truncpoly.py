import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import poly_compose, poly_mul
from wittborel.errors import NonNilpotentSubstituend, NotInvertible
from wittborel.truncpoly import TruncPoly, apply_D, comp_inverse, mul_trunc, substitute, substitution_matrix

P = 7


def polys(p=P, constant=True):
    first = st.integers(0, p - 1) if constant else st.just(0)
    return st.tuples(first, *[st.integers(0, p - 1)] * (p - 1)).map(TruncPoly)


def units(p=P):
    """Substituends x -> a_1 x + ... with a_1 != 0."""
    return st.tuples(st.just(0), st.integers(1, p - 1), *[st.integers(0, p - 1)] * (p - 2)).map(TruncPoly)


@settings(max_examples=200, deadline=None)
@given(polys(), polys())
def test_product_matches_schoolbook(f, g):
    assert list(mul_trunc(f, g).coeffs) == poly_mul(f.coeffs, g.coeffs, P)


@settings(max_examples=200, deadline=None)
@given(polys(), polys(constant=False))
def test_substitute_matches_expansion(f, g):
    assert list(substitute(f, g).coeffs) == poly_compose(f.coeffs, g.coeffs, P)


@settings(max_examples=200, deadline=None)
@given(units())
def test_compositional_inverse_both_sides(g):
    h = comp_inverse(g)
    x = TruncPoly.monomial(P, 1)
    assert substitute(h, g) == x
    assert substitute(g, h) == x


@settings(max_examples=100, deadline=None)
@given(polys(), units())
def test_substitution_matrix_columns(f, g):
    m = substitution_matrix(g)
    assert list(m @ list(f.coeffs) % P) == list(substitute(f, g).coeffs)


@settings(max_examples=100, deadline=None)
@given(polys(), polys())
def test_D_is_a_derivation(f, g):
    assert apply_D(mul_trunc(f, g)) == mul_trunc(apply_D(f), g) + mul_trunc(f, apply_D(g))


def test_D_of_top_power_vanishes():
    # d/dx x^{p-1} = (p-1) x^{p-2}, and d/dx of x^p = 0 is consistent with truncation
    assert apply_D(TruncPoly.monomial(P, P - 1)) == TruncPoly.monomial(P, P - 2, P - 1)


def test_errors():
    with pytest.raises(NonNilpotentSubstituend):
        substitute(TruncPoly.monomial(5, 1), TruncPoly.from_list(5, [1, 1]))
    with pytest.raises(NotInvertible):
        comp_inverse(TruncPoly.monomial(5, 2))


def test_inverse_example():
    # x + x^2 over F_5: inverse is x - x^2 + 2x^3 - 5x^4 = x + 4x^2 + 2x^3
    g = TruncPoly.from_list(5, [0, 1, 1])
    assert comp_inverse(g).coeffs == (0, 1, 4, 2, 0)
