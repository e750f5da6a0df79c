"""Finite-dimensional Lie algebras over F_p given by structure constants,
and their subalgebras in canonical reduced row-echelon form.

Both W_1 and the Jacobson-Witt algebras W_n are instances of
:class:`LieAlgebra`; subalgebra arithmetic is shared between them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np
from scipy import sparse

from . import linalg
from .errors import NotClosed


@dataclass(eq=False)
class LieAlgebra:
    """Structure constants ``table[a, b, c]``: coefficient of e_c in [e_a, e_b].

    ``degrees[a]`` is the filtration degree of basis vector a (the standard
    filtration of W_n is spanned by basis vectors of degree >= i).
    ``operator`` maps a coefficient vector to its matrix acting on the
    underlying truncated polynomial algebra.
    """

    name: str
    p: int
    table: np.ndarray
    degrees: np.ndarray
    operator: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.table.shape[0]

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Bracket of single vectors or of equally stacked (N, dim) batches."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        return np.einsum("...b,...bc->...c", v, self.ad_matrix(u)) % self.p

    def ad_matrix(self, u: np.ndarray) -> np.ndarray:
        """M with [u, v] = v @ M (row-vector convention); stacks over leading axes."""
        u = np.asarray(u, dtype=np.int64)
        flat = u.reshape(-1, self.dim)
        # (sparse^T @ dense^T)^T keeps the product inside scipy.sparse
        m = (self._sparse_table.T @ flat.T).T % self.p
        return np.asarray(m).reshape(u.shape[:-1] + (self.dim, self.dim))

    @cached_property
    def _sparse_table_t(self) -> sparse.csr_matrix:
        return self._sparse_table.T.tocsr().astype(np.float64)

    @cached_property
    def _sparse_table(self) -> sparse.csr_matrix:
        # most structure constants vanish: x^a D_i, x^b D_j bracket to at most two terms
        return sparse.csr_matrix(self.table.reshape(self.dim, self.dim * self.dim))

    def ad(self, u: np.ndarray) -> np.ndarray:
        """Column-convention matrix of ad(u): ad(u) @ v = [u, v]."""
        return np.swapaxes(self.ad_matrix(u), -1, -2)

    def basis_vector(self, a: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[a] = 1
        return v

    @cached_property
    def max_degree(self) -> int:
        return int(self.degrees.max())

    @cached_property
    def min_degree(self) -> int:
        return int(self.degrees.min())


class Subalgebra:
    """A subspace of an ambient LieAlgebra held as its canonical RREF basis.

    Two subspaces are equal iff their RREF bases agree, so instances hash by
    that canonical key. ``closed`` records whether bracket closure has been
    verified.
    """

    __slots__ = ("ambient", "basis", "pivots", "closed", "_key")

    def __init__(self, ambient: LieAlgebra, rows: np.ndarray | Sequence, *, closed: bool = False, reduced: bool = False):
        self.ambient = ambient
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, ambient.dim)
        if reduced:
            self.basis, self.pivots = rows, _pivots_of(rows)
        else:
            self.basis, self.pivots = linalg.rref(rows, ambient.p)
        self.basis.setflags(write=False)
        self.closed = closed
        self._key = None

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def p(self) -> int:
        return self.ambient.p

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.basis.tobytes() + bytes([self.dim])
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Subalgebra) and self.ambient is other.ambient and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Subalgebra({self.ambient.name}, dim={self.dim}, closed={self.closed})"

    def __contains__(self, v) -> bool:
        return not self.reduce(np.asarray(v, dtype=np.int64)).any()

    def reduce(self, v: np.ndarray) -> np.ndarray:
        return linalg.reduce_rows(v, self.basis, self.pivots, self.p)

    def contains_subspace(self, other: Subalgebra) -> bool:
        return not self.reduce(other.basis).any()

    def is_bracket_closed(self) -> bool:
        if self.dim == 0:
            return True
        return not self.reduce(pairwise_brackets(self.ambient, self.basis)).any()

    def complement_coordinates(self) -> list[int]:
        """Non-pivot coordinates; their unit vectors span a complement."""
        piv = set(self.pivots)
        return [c for c in range(self.ambient.dim) if c not in piv]

    def elements(self) -> Iterator[np.ndarray]:
        """All p^dim elements (small dimensions only)."""
        for coords in _all_vectors(self.dim, self.p):
            yield np.asarray(coords, dtype=np.int64) @ self.basis % self.p

    def line_representatives(self) -> Iterator[np.ndarray]:
        """One nonzero element per 1-dimensional subspace."""
        for coords in projective_points(self.dim, self.p):
            yield np.asarray(coords, dtype=np.int64) @ self.basis % self.p


def _pivots_of(rows: np.ndarray) -> list[int]:
    return [int(np.flatnonzero(r)[0]) for r in rows]


def _all_vectors(n: int, p: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for head in range(p):
        for tail in _all_vectors(n - 1, p):
            yield (head,) + tail


def projective_points(n: int, p: int) -> Iterator[tuple[int, ...]]:
    """Vectors in F_p^n whose first nonzero entry is 1: one per line."""
    for lead in range(n):
        for tail in _all_vectors(n - lead - 1, p):
            yield (0,) * lead + (1,) + tail


def count_projective_points(n: int, p: int) -> int:
    return (p**n - 1) // (p - 1)


def pairwise_brackets(alg: LieAlgebra, rows: np.ndarray, others: np.ndarray | None = None) -> np.ndarray:
    """All brackets [rows_i, others_j] flattened to an (n*m, dim) array."""
    others = rows if others is None else others
    if len(rows) == 0 or len(others) == 0:
        return np.zeros((0, alg.dim), dtype=np.int64)
    rows = np.asarray(rows, dtype=np.int64) % alg.p
    others = np.asarray(others, dtype=np.int64) % alg.p
    if alg.dim**2 * (alg.p - 1) ** 3 < 2**53:
        # unreduced float products stay exact below 2**53; reduce once at the end
        n, m, d = len(rows), len(others), alg.dim
        # t[b, c, i] = sum_a table[a, b, c] rows[i, a]; then one GEMM over b
        t = np.asarray(alg._sparse_table_t @ rows.T.astype(np.float64)).reshape(d, d * n)
        out = (others.astype(np.float64) @ t).reshape(m, d, n).transpose(2, 0, 1)
        out = linalg.float_residues(out, alg.p)
    else:
        out = np.einsum("jb,ibc->ijc", others, alg.ad_matrix(rows)) % alg.p
    return out.reshape(-1, alg.dim)


class _Echelon:
    """Incrementally maintained RREF basis."""

    def __init__(self, dim: int, p: int):
        self.p = p
        self.rows = np.zeros((0, dim), dtype=np.int64)
        self.pivots: list[int] = []

    def absorb(self, vectors: np.ndarray) -> np.ndarray:
        """Add vectors to the span; return a basis of the genuinely new part."""
        if len(vectors) == 0:
            return vectors
        self.rows, self.pivots, new = linalg.merge_rref(self.rows, self.pivots, vectors, self.p)
        return new


def span(alg: LieAlgebra, vectors: Iterable) -> Subalgebra:
    rows = np.asarray(list(vectors), dtype=np.int64).reshape(-1, alg.dim)
    return Subalgebra(alg, rows)


def span_closure(alg: LieAlgebra, gens: Iterable, *, max_dim: int | None = None) -> Subalgebra | None:
    """Smallest bracket-closed subspace containing ``gens``.

    With ``max_dim`` set, gives up and returns None as soon as the span
    grows past that dimension.
    """
    ech = _Echelon(alg.dim, alg.p)
    gens = np.asarray(list(gens) if not isinstance(gens, np.ndarray) else gens, dtype=np.int64).reshape(-1, alg.dim)
    frontier = ech.absorb(gens % alg.p)
    done = np.zeros((0, alg.dim), dtype=np.int64)
    while len(frontier):
        if max_dim is not None and len(ech.pivots) > max_dim:
            return None
        brackets = np.vstack([
            pairwise_brackets(alg, frontier, done),
            pairwise_brackets(alg, frontier),
        ])
        done = np.vstack([done, frontier])
        frontier = ech.absorb(brackets)
    if max_dim is not None and len(ech.pivots) > max_dim:
        return None
    return Subalgebra(alg, ech.rows, closed=True, reduced=True)


def extend(S: Subalgebra, gens: Iterable, *, max_dim: int | None = None) -> Subalgebra | None:
    """span_closure(S ∪ gens) for a closed S, reusing S's closedness."""
    alg = S.ambient
    ech = _Echelon(alg.dim, alg.p)
    ech.rows, ech.pivots = np.array(S.basis), list(S.pivots)
    done = np.array(S.basis)
    gens = np.asarray(list(gens) if not isinstance(gens, np.ndarray) else gens, dtype=np.int64).reshape(-1, alg.dim)
    frontier = ech.absorb(gens % alg.p)
    while len(frontier):
        if max_dim is not None and len(ech.pivots) > max_dim:
            return None
        brackets = np.vstack([
            pairwise_brackets(alg, frontier, done),
            pairwise_brackets(alg, frontier),
        ])
        done = np.vstack([done, frontier])
        frontier = ech.absorb(brackets)
    if max_dim is not None and len(ech.pivots) > max_dim:
        return None
    return Subalgebra(alg, ech.rows, closed=True, reduced=True)


def bracket_span(A: Subalgebra, B: Subalgebra) -> Subalgebra:
    """[A, B] as a subspace."""
    if A is B:
        # antisymmetry: pairs i < j suffice
        i, j = np.triu_indices(A.dim, 1)
        full = pairwise_brackets(A.ambient, A.basis).reshape(A.dim, A.dim, -1)
        return Subalgebra(A.ambient, full[i, j])
    return Subalgebra(A.ambient, pairwise_brackets(A.ambient, A.basis, B.basis))


def _require_closed(S: Subalgebra) -> None:
    if not S.closed:
        if not S.is_bracket_closed():
            raise NotClosed("subspace is not closed under the bracket")
        S.closed = True


def derived_series(S: Subalgebra, base: Sequence[Subalgebra] | None = None) -> list[Subalgebra]:
    """S, [S,S], [[S,S],[S,S]], ... ending at 0 or at the first repeated term.

    ``base`` may be the derived series of a subalgebra B of S. Then each term
    is [B_i, B_i] + [N, S_i] with N spanning S_i modulo B_i, which avoids
    re-bracketing B_i with itself.
    """
    _require_closed(S)
    series = [S]
    while series[-1].dim:
        cur = series[-1]
        below = _series_term(base, len(series) - 1)
        if below is None:
            nxt = bracket_span(cur, cur)
        else:
            rest = below.reduce(cur.basis)
            new = linalg.rref(rest[rest.any(axis=1)], S.p)[0]
            rows = [pairwise_brackets(S.ambient, new, cur.basis)]
            after = _series_term(base, len(series))
            if after is not None:
                rows.append(after.basis)
            nxt = Subalgebra(S.ambient, np.vstack(rows))
        nxt.closed = True
        if nxt.dim == cur.dim:
            break
        series.append(nxt)
    return series


def _series_term(series: Sequence[Subalgebra] | None, i: int) -> Subalgebra | None:
    # the i-th derived term, continuing a stabilised tail; None for zero
    if not series:
        return None
    term = series[i] if i < len(series) else series[-1]
    return term if term.dim else None


def is_solvable(S: Subalgebra, base: Sequence[Subalgebra] | None = None) -> bool:
    return derived_series(S, base)[-1].dim == 0


def derived_length(S: Subalgebra) -> int:
    """Number of nonzero terms in the derived series (solvable S only)."""
    series = derived_series(S)
    return sum(1 for t in series if t.dim)


def lower_central_series(S: Subalgebra) -> list[Subalgebra]:
    _require_closed(S)
    series = [S]
    while series[-1].dim:
        nxt = bracket_span(S, series[-1])
        nxt.closed = True
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def is_nilpotent_algebra(S: Subalgebra) -> bool:
    return lower_central_series(S)[-1].dim == 0


def normalizer(S: Subalgebra) -> Subalgebra:
    """{x : [x, S] ⊆ S}, solved as one linear system over F_p."""
    _require_closed(S)
    alg, p = S.ambient, S.p
    if S.dim == 0:
        return Subalgebra(alg, np.eye(alg.dim, dtype=np.int64), closed=True)
    # [x, s] = -(x @ ad_matrix(s)); x is in the normalizer iff every such bracket reduces to 0
    blocks = []
    for s in S.basis:
        m = alg.ad_matrix(s)
        if S.pivots:
            m = (m - m[:, S.pivots] @ S.basis) % p
        blocks.append(m)
    system = np.hstack(blocks)  # x @ system == 0
    sol = linalg.nullspace(system.T, p)
    return Subalgebra(alg, sol, closed=True)


def filtration_dims(S: Subalgebra) -> tuple[int, ...]:
    """dim(S ∩ g_i) for i from the lowest to the highest filtration degree."""
    alg, p = S.ambient, S.p
    out = []
    for i in range(alg.min_degree, alg.max_degree + 1):
        low = np.flatnonzero(alg.degrees < i)
        if len(low) == 0 or S.dim == 0:
            out.append(S.dim)
        else:
            out.append(S.dim - linalg.rank(S.basis[:, low], p))
    return tuple(out)
