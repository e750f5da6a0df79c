import itertools

import numpy as np
import pytest

from wittborel import lie
from wittborel.jacobson_witt import jacobson_witt_algebra
from wittborel.lie import LieAlgebra, Subalgebra
from wittborel.witt import WittElement, bracket, witt_algebra


def sl2(p):
    # basis e, h, f with [h, e] = 2e, [h, f] = -2f, [e, f] = h
    t = np.zeros((3, 3, 3), dtype=np.int64)
    e, h, f = 0, 1, 2
    t[h, e, e], t[e, h, e] = 2, -2
    t[h, f, f], t[f, h, f] = -2, 2
    t[e, f, h], t[f, e, h] = 1, -1
    return LieAlgebra("sl2", p, t % p, np.zeros(3, dtype=np.int64), None)


def heisenberg(p):
    t = np.zeros((3, 3, 3), dtype=np.int64)
    t[0, 1, 2], t[1, 0, 2] = 1, p - 1
    return LieAlgebra("heis", p, t, np.zeros(3, dtype=np.int64), None)


def test_pairwise_brackets_match_elementwise(rng):
    p = 7
    alg = witt_algebra(p)
    u = rng.integers(0, p, size=(5, p))
    v = rng.integers(0, p, size=(3, p))
    got = lie.pairwise_brackets(alg, u, v)
    want = [bracket(WittElement(tuple(a)), WittElement(tuple(b))).coeffs for a in u for b in v]
    assert [tuple(r) for r in got] == want


def test_ad_conventions(rng):
    p = 5
    alg = witt_algebra(p)
    u, v = rng.integers(0, p, size=(2, p))
    assert np.array_equal(v @ alg.ad_matrix(u) % p, alg.bracket(u, v))
    assert np.array_equal(alg.ad(u) @ v % p, alg.bracket(u, v))


@pytest.mark.parametrize("p", [5, 7])
def test_sl2_and_heisenberg(p):
    s = sl2(p)
    whole = Subalgebra(s, np.eye(3), closed=True)
    assert not lie.is_solvable(whole)
    assert lie.bracket_span(whole, whole) == whole
    h = heisenberg(p)
    H = Subalgebra(h, np.eye(3), closed=True)
    assert lie.is_solvable(H) and lie.is_nilpotent_algebra(H)
    assert lie.derived_length(H) == 2
    assert [t.dim for t in lie.lower_central_series(H)] == [3, 1, 0]


def test_span_closure_of_D_and_x2D():
    p = 5
    alg = witt_algebra(p)
    S = lie.span_closure(alg, [WittElement.basis(p, 0).vector(), WittElement.basis(p, 2).vector()])
    assert S.dim == 3 and S.is_bracket_closed()
    assert lie.span_closure(alg, [WittElement.basis(p, 2).vector()], max_dim=0) is None


def test_closure_generates_everything():
    p = 7
    alg = witt_algebra(p)
    S = lie.span_closure(alg, [WittElement.basis(p, 0).vector(), WittElement.basis(p, p - 1).vector()])
    assert S.dim == p


def test_extend_matches_span_closure(rng):
    p = 5
    alg = jacobson_witt_algebra(2, p)
    base = lie.span_closure(alg, [np.eye(alg.dim, dtype=np.int64)[7]])
    x = rng.integers(0, p, size=alg.dim) * (rng.random(alg.dim) < 0.1)
    assert lie.extend(base, [x]) == lie.span_closure(alg, [base.basis[0], x])


def test_relative_derived_series(rng):
    p = 5
    alg = jacobson_witt_algebra(2, p)
    for _ in range(20):
        mask = rng.random((2, alg.dim)) < 0.3
        B = lie.span_closure(alg, rng.integers(0, p, size=(1, alg.dim)) * mask[:1])
        T = lie.extend(B, rng.integers(0, p, size=(1, alg.dim)) * mask[1:])
        plain = lie.derived_series(T)
        relative = lie.derived_series(T, lie.derived_series(B))
        assert [t.key for t in plain] == [t.key for t in relative]


def test_normalizer_by_brute_force():
    p = 5
    alg = witt_algebra(p)
    for gens in ([0], [1], [0, 1], [2, 3, 4]):
        S = lie.span_closure(alg, [np.eye(p, dtype=np.int64)[g] for g in gens])
        brute = [
            np.array(x) for x in itertools.product(range(p), repeat=p)
            if S.contains_subspace(Subalgebra(alg, lie.pairwise_brackets(alg, np.array([x]), S.basis)))
        ]
        N = lie.normalizer(S)
        assert N.dim == Subalgebra(alg, np.array(brute)).dim
        assert all(x in N for x in brute)


def test_filtration_dims():
    p = 5
    alg = witt_algebra(p)
    S = Subalgebra(alg, np.eye(p, dtype=np.int64)[1:], closed=True)  # g_0
    assert lie.filtration_dims(S) == (4, 4, 3, 2, 1)


def test_subalgebra_canonical_form():
    p = 5
    alg = witt_algebra(p)
    a = Subalgebra(alg, [[1, 2, 0, 0, 0], [0, 1, 0, 0, 0]])
    b = Subalgebra(alg, [[1, 0, 0, 0, 0], [3, 3, 0, 0, 0]])
    assert a == b and hash(a) == hash(b)
    assert np.array([4, 4, 0, 0, 0]) in a
    assert a.complement_coordinates() == [2, 3, 4]
    assert len(list(a.line_representatives())) == lie.count_projective_points(2, p) == 6
    assert len(list(a.elements())) == 25


def test_derived_series_requires_closure():
    from wittborel.errors import NotClosed

    p = 5
    alg = witt_algebra(p)
    with pytest.raises(NotClosed):
        lie.derived_series(Subalgebra(alg, [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]]))
