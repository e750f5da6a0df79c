import numpy as np
import pytest

from wittborel.autgroup import apply, apply_subalgebra, random_automorphism
from wittborel.borel import (
    MINUS, PLUS, classify_borel, encode_subalgebra, find_sl2_triple, is_maximal_solvable,
    parse_subalgebra, sl2_detect, sl2_standard, span_closure, standard_borels, subspace, verify_class,
)
from wittborel.errors import ClassificationFailed, NotBorel, NotClosed, NotSolvable
from wittborel.lie import is_solvable
from wittborel.witt import WittElement, bracket, restriction_scalar


@pytest.mark.parametrize("method", ["exhaustive", "cosets"])
def test_standard_borels_are_maximal_p5(method):
    plus, minus = standard_borels(5)
    assert is_maximal_solvable(plus, method=method)
    assert is_maximal_solvable(minus, method=method)


def test_non_maximal_detected():
    p = 5
    D = WittElement.basis(p, 0)
    assert not is_maximal_solvable(subspace(p, [D]), method="exhaustive")
    assert not is_maximal_solvable(subspace(p, [WittElement.basis(p, 2)]), method="cosets")
    assert not is_maximal_solvable(subspace(p, [WittElement.basis(p, 2)]), method="sample", samples=500)


def test_maximality_preconditions():
    p = 5
    with pytest.raises(NotClosed):
        is_maximal_solvable(subspace(p, [WittElement.basis(p, 0), WittElement.basis(p, 2)]))
    with pytest.raises(NotSolvable):
        is_maximal_solvable(sl2_standard(p))


@pytest.mark.parametrize("p", [5, 7, 11])
def test_sl2_triple(p):
    S = sl2_standard(p)
    assert not is_solvable(S)
    e, h, f = find_sl2_triple(S)
    assert bracket(h, e) == e * 2
    assert bracket(h, f) == f * (-2)
    assert bracket(e, f) == h
    assert all(S.contains_subspace(subspace(p, [t])) for t in (e, h, f))


def test_sl2_detect():
    p = 5
    plus, minus = standard_borels(p)
    assert not sl2_detect(plus) and not sl2_detect(minus)
    whole = subspace(p, [WittElement.basis(p, a) for a in range(p)])
    assert sl2_detect(whole)


def test_sl2_in_conjugate(rng):
    p = 7
    phi = random_automorphism(p, rng)
    assert sl2_detect(apply_subalgebra(phi, sl2_standard(p)))


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_classify_conjugates(p, rng):
    plus, minus = standard_borels(p)
    for _ in range(20):
        phi = random_automorphism(p, rng)
        for B, tag in ((plus, PLUS), (minus, MINUS)):
            cls = classify_borel(apply_subalgebra(phi, B), check_maximal=(p == 5))
            assert cls.tag == tag
            assert verify_class(apply_subalgebra(phi, B), cls)


def test_classify_minus_example():
    B = parse_subalgebra("1,0,0,0,0;0,1,0,0,0", 5)
    cls = classify_borel(B)
    assert cls.to_dict() == {"class": "minus", "witness": "1,0,0,0"}


def test_classify_rejects():
    p = 5
    with pytest.raises(NotBorel):
        classify_borel(sl2_standard(p))
    with pytest.raises(NotBorel):
        classify_borel(subspace(p, [WittElement.basis(p, 0)]))
    with pytest.raises(NotBorel):
        classify_borel(subspace(p, [WittElement.basis(p, 2)]))


def test_rational_lines_outside_g0_can_be_maximal():
    p = 5
    # D + c x^{p-1} D is semisimple with X^[p] = psi0 X; when psi0 is neither 0 nor 1
    # ad X has no nonzero eigenvalue in F_p, so span{X} admits no solvable extension
    for c in range(1, p):
        X = WittElement((1,) + (0,) * (p - 2) + (c,))
        S = subspace(p, [X])
        psi0 = restriction_scalar(X)
        assert is_maximal_solvable(S, method="cosets") == (psi0 not in (0, 1))
        if psi0 not in (0, 1):
            with pytest.raises(ClassificationFailed):
                classify_borel(S)


def test_encoding_round_trip():
    plus, _ = standard_borels(5)
    assert parse_subalgebra(encode_subalgebra(plus), 5) == plus
    with pytest.raises(ValueError):
        parse_subalgebra("", 5)


def test_span_closure_wrapper():
    p = 5
    S = span_closure([WittElement.basis(p, 0), WittElement.basis(p, 2)])
    assert S == sl2_standard(p)
