import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import leibniz_det, naive_rref
from wittborel import linalg


def matrices(max_rows=8, max_cols=8, p=7):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(0, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_permutation_expansion(m):
    assert linalg.det(np.array(m), 7) == leibniz_det(m, 7)


def test_det_batch_matches_single(rng):
    ms = rng.integers(0, 11, size=(50, 4, 4))
    batch = linalg.det(ms, 11)
    assert [int(d) for d in batch] == [leibniz_det(m, 11) for m in ms]


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rref_matches_textbook(m):
    r, piv = linalg.rref(np.array(m), 7)
    r0, piv0 = naive_rref(m, 7)
    assert piv == piv0
    assert r.tolist() == r0


def test_rref_tall_input_uses_blocks(rng):
    # more rows than the block size, low rank
    m = rng.integers(0, 5, size=(500, 3)) @ rng.integers(0, 5, size=(3, 20)) % 5
    r, piv = linalg.rref(m, 5)
    r0, piv0 = naive_rref(m.tolist(), 5)
    assert piv == piv0 and r.tolist() == r0


@settings(max_examples=100, deadline=None)
@given(matrices(6, 9, 5))
def test_nullspace(m):
    m = np.array(m)
    ns = linalg.nullspace(m, 5)
    assert len(ns) == m.shape[1] - linalg.rank(m, 5)
    assert not (m @ ns.T % 5).any()
    assert linalg.rank(ns, 5) == len(ns)


def test_matpow_against_repeated_product(rng):
    a = rng.integers(0, 13, size=(6, 6))
    acc = np.eye(6, dtype=np.int64)
    for e in range(1, 30):
        acc = acc @ a % 13
        assert np.array_equal(linalg.matpow(a, e, 13), acc)


def test_float_path_is_exact():
    p = 13
    a = np.full((3, 60), p - 1)
    b = np.full((60, 2), p - 1)
    assert np.array_equal(linalg.matmul(a, b, p), (a.astype(object) @ b.astype(object)) % p)


@pytest.mark.parametrize("p", [5, 13, 97])
def test_float_residues(p, rng):
    x = rng.integers(0, 2**50, size=10_000)
    assert np.array_equal(linalg.float_residues(x.astype(np.float64), p), x % p)


def test_merge_rref_reports_new_part():
    basis, piv = linalg.rref(np.array([[1, 0, 1, 0]]), 5)
    out, piv2, new = linalg.merge_rref(basis, piv, np.array([[1, 0, 1, 0], [0, 1, 0, 0]]), 5)
    assert piv2 == [0, 1]
    assert new.tolist() == [[0, 1, 0, 0]]
