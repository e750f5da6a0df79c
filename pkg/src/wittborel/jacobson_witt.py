"""Jacobson-Witt algebras W_n = Der(F_p[x_1..x_n]/(x_1^p..x_n^p)) for small n.

Basis vectors are x^alpha D_i, indexed as i * p^n + flat(alpha) with alpha
in row-major order; the filtration degree of x^alpha D_i is |alpha| - 1.
Besides the bracket and the standard Cartan subalgebras T_0..T_n, this
module grows maximal solvable subalgebras greedily and summarises them by
conjugation-invariant signatures, as evidence about how many conjugacy
classes of Borel subalgebras W_n has. Distinct signatures certify distinct
classes; equal signatures prove nothing.
"""
from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import lie, linalg
from .errors import BudgetExceeded, NotClosed, NotSolvable
from .lie import LieAlgebra, Subalgebra, count_projective_points, projective_points

MAX_DIM = 50
RANDOM_CANDIDATES = 10
# quotients with at most this many lines are scanned exhaustively
EXHAUSTIVE_LINES = 5000


def exponents(n: int, p: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(p), repeat=n))


# ---------------------------------------------------------------------------
# truncated polynomials in n variables: numpy arrays of shape (p,)*n

def mt_mul(f: np.ndarray, g: np.ndarray, p: int) -> np.ndarray:
    """Product in F_p[x_1..x_n]/(x_i^p)."""
    out = np.zeros_like(f)
    for alpha in zip(*np.nonzero(f)):
        src = tuple(slice(0, p - a) for a in alpha)
        dst = tuple(slice(a, p) for a in alpha)
        out[dst] += f[alpha] * g[src]
    return out % p


def mt_diff(f: np.ndarray, i: int, p: int) -> np.ndarray:
    """Partial derivative D_i."""
    out = np.zeros_like(f)
    n = f.ndim
    lo = [slice(None)] * n
    hi = [slice(None)] * n
    lo[i] = slice(0, p - 1)
    hi[i] = slice(1, p)
    shape = [1] * n
    shape[i] = p - 1
    out[tuple(lo)] = f[tuple(hi)] * np.arange(1, p).reshape(shape)
    return out % p


def components(v: np.ndarray, n: int, p: int) -> np.ndarray:
    """Coefficient vector -> array (n, p, ..., p) of the f_i in sum f_i D_i."""
    return np.asarray(v, dtype=np.int64).reshape((n,) + (p,) * n)


def wn_bracket(u: np.ndarray, v: np.ndarray, n: int, p: int) -> np.ndarray:
    """[sum f_i D_i, sum g_j D_j] = sum_k (sum_i f_i D_i(g_k) - g_i D_i(f_k)) D_k."""
    f, g = components(u, n, p), components(v, n, p)
    out = np.zeros_like(f)
    for k in range(n):
        for i in range(n):
            out[k] += mt_mul(f[i], mt_diff(g[k], i, p), p) - mt_mul(g[i], mt_diff(f[k], i, p), p)
    return (out % p).reshape(-1)


def monomial(n: int, p: int, alpha: Sequence[int], i: int, c: int = 1) -> np.ndarray:
    """c x^alpha D_i as a coefficient vector (i counts from 0)."""
    v = np.zeros((n,) + (p,) * n, dtype=np.int64)
    v[(i,) + tuple(alpha)] = c % p
    return v.reshape(-1)


@lru_cache(maxsize=None)
def jacobson_witt_algebra(n: int, p: int) -> LieAlgebra:
    exps = exponents(n, p)
    q = len(exps)
    index = {e: j for j, e in enumerate(exps)}
    dim = n * q
    table = np.zeros((dim, dim, dim), dtype=np.int64)
    op = np.zeros((dim, q, q), dtype=np.int64)
    for i in range(n):
        for a, alpha in enumerate(exps):
            for b, beta in enumerate(exps):
                # x^alpha D_i (x^beta) = beta_i x^{alpha + beta - e_i}
                if beta[i]:
                    gamma = tuple(x + y - (t == i) for t, (x, y) in enumerate(zip(alpha, beta)))
                    if max(gamma) < p:
                        op[i * q + a, index[gamma], b] += beta[i]
            for j in range(n):
                for b, beta in enumerate(exps):
                    # [x^a D_i, x^b D_j] = b_i x^{a+b-e_i} D_j - a_j x^{a+b-e_j} D_i
                    s = tuple(x + y for x, y in zip(alpha, beta))
                    if beta[i]:
                        g = list(s)
                        g[i] -= 1
                        if max(g) < p:
                            table[i * q + a, j * q + b, j * q + index[tuple(g)]] += beta[i]
                    if alpha[j]:
                        g = list(s)
                        g[j] -= 1
                        if max(g) < p:
                            table[i * q + a, j * q + b, i * q + index[tuple(g)]] -= alpha[j]
    table %= p
    op %= p
    table.setflags(write=False)
    op.setflags(write=False)
    degrees = np.array([sum(alpha) - 1 for _ in range(n) for alpha in exps])
    return LieAlgebra(
        name=f"W{n}(p={p})",
        p=p,
        table=table,
        degrees=degrees,
        operator=lambda v: np.tensordot(np.asarray(v, dtype=np.int64), op, axes=(-1, 0)) % p,
    )


def linear_substitution_matrix(n: int, p: int, m: np.ndarray) -> np.ndarray:
    """Matrix on W_n of conjugation by the automorphism x_i -> sum_j m[i, j] x_j of A_n.

    Computed as phi E phi^{-1} on operators over A_n, then read back from the
    images of the coordinate functions.
    """
    alg = jacobson_witt_algebra(n, p)
    m = np.asarray(m, dtype=np.int64) % p
    exps = exponents(n, p)
    q = len(exps)
    images = [np.zeros((p,) * n, dtype=np.int64) for _ in range(n)]
    for i in range(n):
        for j in range(n):
            e = [0] * n
            e[j] = 1
            images[i][tuple(e)] = m[i, j]
    # subst[:, b] = coefficients of phi(x^beta) = prod_i phi(x_i)^{beta_i}
    subst = np.zeros((q, q), dtype=np.int64)
    for b, beta in enumerate(exps):
        acc = np.zeros((p,) * n, dtype=np.int64)
        acc[(0,) * n] = 1
        for i in range(n):
            for _ in range(beta[i]):
                acc = mt_mul(acc, images[i], p)
        subst[:, b] = acc.reshape(-1)
    sinv = _inverse_mod(subst, p)
    coord = [exps.index(tuple(int(t == i) for t in range(n))) for i in range(n)]
    out = np.zeros((alg.dim, alg.dim), dtype=np.int64)
    for a in range(alg.dim):
        conj = subst @ alg.operator(alg.basis_vector(a)) @ sinv % p
        # a derivation sum g_k D_k sends x_k to g_k
        out[:, a] = np.concatenate([conj[:, coord[k]] for k in range(n)])
    return out


def _inverse_mod(m: np.ndarray, p: int) -> np.ndarray:
    k = m.shape[0]
    r, piv = linalg.rref(np.hstack([m, np.eye(k, dtype=np.int64)]), p)
    if piv[:k] != list(range(k)) or len(piv) < k:
        raise ValueError("matrix is singular")
    return r[:k, k:]


# ---------------------------------------------------------------------------
# Cartan subalgebras

def cartan_list(n: int, p: int) -> list[Subalgebra]:
    """T_0..T_n: T_k has generators x_i D_i for i < k and (1 + x_i) D_i otherwise."""
    if n < 1:
        raise ValueError("n must be >= 1")
    alg = jacobson_witt_algebra(n, p)
    zero = (0,) * n
    out = []
    for k in range(n + 1):
        gens = []
        for i in range(n):
            unit = tuple(int(t == i) for t in range(n))
            g = monomial(n, p, unit, i)
            if i >= k:
                g = (g + monomial(n, p, zero, i)) % p
            gens.append(g)
        out.append(Subalgebra(alg, np.array(gens), closed=True))
    return out


def is_cartan(S: Subalgebra) -> bool:
    """Nilpotent and self-normalising."""
    if not S.closed and not S.is_bracket_closed():
        raise NotClosed("subspace is not closed under the bracket")
    S.closed = True
    return lie.is_nilpotent_algebra(S) and lie.normalizer(S) == S


# ---------------------------------------------------------------------------
# signatures

@dataclass(frozen=True)
class SolvableSignature:
    """Conjugation invariants of a solvable subalgebra.

    nilpotent_count is the number of derived-series terms whose elements act
    nilpotently on A_n (so consist of [p]-nilpotent elements).
    """

    dim: int
    derived_length: int
    filtration_dims: tuple[int, ...]
    nilpotent_count: int

    def to_dict(self) -> dict:
        d = asdict(self)
        d["filtration_dims"] = list(self.filtration_dims)
        return d


def acts_nilpotently(S: Subalgebra) -> bool:
    """Whether the associative algebra generated by S on A_n is nilpotent."""
    alg = S.ambient
    if S.dim == 0:
        return True
    ops = alg.operator(S.basis)  # (d, q, q)
    q = ops.shape[-1]
    cur = np.eye(q, dtype=np.int64)
    while len(cur):
        images = linalg.matmul(ops, cur.T, alg.p).transpose(0, 2, 1).reshape(-1, q)
        nxt, _ = linalg.rref(images, alg.p)
        if len(nxt) == len(cur):
            return False
        cur = nxt
    return True


def signature(S: Subalgebra) -> SolvableSignature:
    series = lie.derived_series(S)
    if series[-1].dim:
        raise NotSolvable("signature is defined for solvable subalgebras")
    nonzero = [t for t in series if t.dim]
    return SolvableSignature(
        dim=S.dim,
        derived_length=len(nonzero),
        filtration_dims=lie.filtration_dims(S),
        nilpotent_count=sum(acts_nilpotently(t) for t in nonzero),
    )


# ---------------------------------------------------------------------------
# greedy growth

def _random_filtered(alg: LieAlgebra, rng: np.random.Generator) -> np.ndarray:
    """Nonzero random vector of W_{n,i} for a level i drawn uniformly from the filtration."""
    degrees = np.asarray(alg.degrees)
    levels = np.unique(degrees)
    mask = degrees >= levels[rng.integers(len(levels))]
    v = np.zeros(alg.dim, dtype=np.int64)
    while not v.any():
        v = np.where(mask, rng.integers(0, alg.p, size=alg.dim), 0)
    return v


def _candidate_pool(alg: LieAlgebra, seed: int) -> np.ndarray:
    """Monomials plus RANDOM_CANDIDATES filtered random vectors, in seeded order."""
    rng = np.random.default_rng([seed, alg.dim, alg.p, 2])
    extra = [_random_filtered(alg, rng) for _ in range(RANDOM_CANDIDATES)]
    pool = np.vstack([np.eye(alg.dim, dtype=np.int64)] + [np.asarray(extra).reshape(-1, alg.dim)])
    return pool[rng.permutation(len(pool))]


def _quotient_lines(S: Subalgebra, rng: np.random.Generator) -> np.ndarray:
    comp = S.complement_coordinates()
    pts = np.array(list(projective_points(len(comp), S.p)), dtype=np.int64)
    out = np.zeros((len(pts), S.ambient.dim), dtype=np.int64)
    out[:, comp] = pts
    return out[rng.permutation(len(out))]


def _candidates(S: Subalgebra, seed: int, rng: np.random.Generator) -> np.ndarray:
    if count_projective_points(S.ambient.dim - S.dim, S.p) <= EXHAUSTIVE_LINES:
        return _quotient_lines(S, rng)
    return _candidate_pool(S.ambient, seed)


def _extends(S: Subalgebra, x: np.ndarray, series: list[Subalgebra] | None = None) -> list[Subalgebra] | None:
    """Derived series of span_closure(S + x) if that is solvable, else None."""
    T = lie.extend(S, [x], max_dim=S.ambient.dim - 1)
    if T is None:
        return None
    grown = lie.derived_series(T, series or lie.derived_series(S))
    return grown if grown[-1].dim == 0 else None


def grow_maximal_solvable(seed: int, n: int, p: int, *, initial: Iterable | None = None) -> Subalgebra:
    """Grow a solvable subalgebra one line at a time until no candidate extends it.

    The starting line is a random element of a randomly chosen filtration
    level. When the quotient by the current subalgebra has at most
    EXHAUSTIVE_LINES lines, every line is a candidate and the result is
    genuinely maximal solvable; otherwise candidates come from the seeded
    pool of _candidate_pool. Output depends only on (seed, n, p, initial).
    """
    alg = jacobson_witt_algebra(n, p)
    if alg.dim > MAX_DIM:
        raise BudgetExceeded(f"dim W_{n} = {alg.dim} exceeds the budget of {MAX_DIM}")
    rng = np.random.default_rng([seed, n, p])
    if initial is not None:
        S = lie.span_closure(alg, np.asarray(list(initial), dtype=np.int64))
        if not lie.is_solvable(S):
            raise NotSolvable("initial generators span a non-solvable subalgebra")
    else:
        S = lie.span_closure(alg, _random_filtered(alg, rng)[None])
    # a candidate that fails for S fails for every S' containing S, since the
    # closure of S' + x contains the non-solvable closure of S + x
    failed: set[bytes] = set()
    series = lie.derived_series(S)
    while True:
        for x in _candidates(S, seed, rng):
            key = x.tobytes()
            if key in failed or x in S:
                continue
            grown = _extends(S, x, series)
            if grown is not None:
                S, series = grown[0], grown
                break
            failed.add(key)
        else:
            return S


def audit_single_line_maximality(S: Subalgebra, seed: int) -> bool:
    """Re-check that no candidate line of the growth procedure for ``seed`` extends S."""
    rng = np.random.default_rng([seed, S.ambient.dim, S.p, 1])
    series = lie.derived_series(S)
    return all(_extends(S, x, series) is None for x in _candidates(S, seed, rng) if x not in S)


def _explore_one(args) -> tuple[int, SolvableSignature, str | None, str | None]:
    seed, n, p, classify = args
    S = grow_maximal_solvable(seed, n, p)
    tag = basis = None
    if classify and n == 1:
        from .borel import classify_borel, encode_subalgebra  # W_1 only
        from .errors import ClassificationFailed, NotBorel

        try:
            tag = classify_borel(_as_witt(S)).tag
        except (ClassificationFailed, NotBorel):
            tag = "failed"
            basis = encode_subalgebra(_as_witt(S))
    return seed, signature(S), tag, basis


def explore(n: int, p: int, seeds: Sequence[int], *, jobs: int = 1, classify: bool = True) -> dict:
    """Signature census of greedily grown maximal solvable subalgebras.

    For n = 1 each output is also run through the W_1 Borel classification.
    """
    tasks = [(int(s), n, p, classify) for s in seeds]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_explore_one, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_explore_one(t) for t in tasks]
    census = Counter(sig for _, sig, _, _ in results)
    report = {
        "n": n,
        "p": p,
        "seeds": len(tasks),
        "distinct_signatures": len(census),
        "signatures": [
            {**sig.to_dict(), "count": count}
            for sig, count in sorted(census.items(), key=lambda kv: (kv[0].dim, kv[0].filtration_dims, kv[0].derived_length, kv[0].nilpotent_count))
        ],
    }
    if n == 1 and classify:
        classes = Counter(tag for _, _, tag, _ in results)
        report["classes"] = {k: classes.get(k, 0) for k in ("plus", "minus", "failed")}
        # maximal solvable over F_p yet conjugate to neither standard Borel
        report["counterexamples"] = [
            {"seed": seed, "basis": basis} for seed, _, tag, basis in results if tag == "failed"
        ]
    return report


def _as_witt(S: Subalgebra) -> Subalgebra:
    """Re-home a subalgebra of W_1 (n = 1) onto the witt module's ambient algebra."""
    from .witt import witt_algebra

    return Subalgebra(witt_algebra(S.p), S.basis, closed=S.closed, reduced=True)
