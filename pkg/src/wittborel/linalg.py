"""Exact linear algebra over F_p on int64 numpy arrays.

Every routine accepts stacked inputs where noted so that enumeration
drivers can process many small matrices per call. Entries stay below p
between operations, so int64 never overflows for the sizes used here.
"""
from __future__ import annotations

import numpy as np

from .field import inverse_table


_EXACT = 2**53


def float_residues(x: np.ndarray, p: int) -> np.ndarray:
    """Residues of integer-valued floats below 2**53, as int64.

    floor(x / p) is exact in this range and much cheaper than an integer modulo.
    """
    return (x - p * np.floor(x / p)).astype(np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of residue arrays, reduced mod p.

    Goes through float64 BLAS when every partial sum provably stays below
    2**53, so the result is still exact; otherwise plain int64.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] * (p - 1) ** 2 < _EXACT and a.size and b.size:
        out = np.matmul((a % p).astype(np.float64), (b % p).astype(np.float64))
        return float_residues(out, p)
    return np.matmul(a.astype(np.int64) % p, b.astype(np.int64) % p) % p


def matpow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    """a**e mod p by repeated squaring; works on stacks (..., n, n)."""
    a = np.asarray(a, dtype=np.int64) % p
    n = a.shape[-1]
    result = np.broadcast_to(np.eye(n, dtype=np.int64), a.shape).copy()
    base = a
    first = True
    while e:
        if e & 1:
            result = base.copy() if first else np.matmul(result, base) % p
            first = False
        e >>= 1
        if e:
            base = np.matmul(base, base) % p
    return result


def det(m: np.ndarray, p: int) -> np.ndarray | int:
    """Determinant mod p by Gaussian elimination; stacked (..., n, n) input."""
    a = np.array(m, dtype=np.int64) % p
    if a.ndim == 2:
        return int(det(a[None], p)[0])
    *batch, n, _ = a.shape
    a = a.reshape(-1, n, n)
    count = a.shape[0]
    table = inverse_table(p)
    d = np.ones(count, dtype=np.int64)
    rows = np.arange(count)
    for c in range(n):
        nonzero = a[:, c:, c] != 0
        has = nonzero.any(axis=1)
        piv = c + nonzero.argmax(axis=1)
        swap = has & (piv != c)
        if swap.any():
            r, s = rows[swap], piv[swap]
            top = a[r, c].copy()
            a[r, c] = a[r, s]
            a[r, s] = top
            d[swap] = -d[swap] % p
        pv = a[:, c, c]
        d = d * pv % p
        if c + 1 < n:
            factor = a[:, c + 1:, c] * table[pv][:, None] % p
            a[:, c + 1:, c:] = (a[:, c + 1:, c:] - factor[:, :, None] * a[:, None, c, c:]) % p
    return d.reshape(batch)


RREF_BLOCK = 64


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form with zero rows dropped, plus pivot columns."""
    a = np.array(m, dtype=np.int64).reshape(-1, np.shape(m)[-1]) % p
    if len(a) > 2 * RREF_BLOCK:
        return _rref_blocked(a, p)
    return _rref_dense(a, p)


def _rref_blocked(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    # tall inputs: fold blocks of rows into a running basis, whose size is bounded by the width
    basis = np.zeros((0, a.shape[1]), dtype=np.int64)
    pivots: list[int] = []
    for start in range(0, len(a), RREF_BLOCK):
        basis, pivots, _ = merge_rref(basis, pivots, a[start:start + RREF_BLOCK], p)
        if len(pivots) == a.shape[1]:
            break
    return basis, pivots


def merge_rref(basis: np.ndarray, pivots: list[int], vectors: np.ndarray,
               p: int) -> tuple[np.ndarray, list[int], np.ndarray]:
    """RREF of span(basis, vectors) for an RREF ``basis``.

    Also returns the RREF rows spanning the part of ``vectors`` that was new.
    """
    rest = reduce_rows(vectors, basis, pivots, p)
    rest = rest[rest.any(axis=1)]
    if len(rest) == 0:
        return basis, pivots, rest
    new, new_piv = _rref_dense(rest, p)
    if pivots:
        basis = (basis - matmul(basis[:, new_piv], new, p)) % p
    rows = np.vstack([basis, new])
    piv = pivots + new_piv
    order = np.argsort(piv, kind="stable")
    return rows[order], [piv[i] for i in order], new


def _rref_dense(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    rows, cols = a.shape
    table = inverse_table(p)
    pivots: list[int] = []
    r = c = 0
    while r < rows:
        live = np.flatnonzero(a[r:, c:].any(axis=0))
        if live.size == 0:
            break
        c += int(live[0])
        k = r + int(np.flatnonzero(a[r:, c])[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * table[a[r, c]] % p
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a -= np.outer(col, a[r])
            a %= p
        pivots.append(c)
        r += 1
        c += 1
    return a[:r], pivots


def rank(m: np.ndarray, p: int) -> int:
    return len(rref(m, p)[1])


def nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {x : m @ x = 0 mod p}."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    r, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = -r[row, f] % p
    return basis


def reduce_rows(v: np.ndarray, basis: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Remainder of each row of v modulo the row span of an RREF basis."""
    if not pivots:
        return np.asarray(v, dtype=np.int64) % p
    v = np.asarray(v, dtype=np.int64)
    return (v - matmul(v[..., pivots], basis, p)) % p
