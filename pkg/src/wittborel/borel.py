"""Solvable and Borel subalgebras of W_1 over F_p.

A Borel subalgebra is a maximal solvable subalgebra. Two standard ones are
B+ = g_0 = span{x^{i+1}D : i >= 0} and B- = span{D, xD};
:func:`classify_borel` conjugates an arbitrary Borel onto one of them and
returns the conjugating automorphism as a checked witness.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

import numpy as np

from . import lie
from .autgroup import Automorphism, apply, apply_subalgebra, invert_aut
from .errors import ClassificationFailed, NotBorel, NotClosed, NotSolvable
from .lie import Subalgebra, count_projective_points, derived_series, is_solvable, projective_points
from .nilcone import is_nilpotent, torus_normalize
from .witt import WittElement, witt_algebra

PLUS = "plus"
MINUS = "minus"
# complements with more lines than this fall back to sampling in is_maximal_solvable
COSET_BUDGET = 200_000


def _rows(elements: Iterable) -> np.ndarray:
    rows = [e.vector() if isinstance(e, WittElement) else np.asarray(e, dtype=np.int64) for e in elements]
    return np.array(rows, dtype=np.int64)


def subspace(p: int, elements: Iterable) -> Subalgebra:
    return Subalgebra(witt_algebra(p), _rows(elements))


def span_closure(gens: Iterable[WittElement]) -> Subalgebra:
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    return lie.span_closure(witt_algebra(gens[0].p), _rows(gens))


def elements_of(S: Subalgebra) -> list[WittElement]:
    return [WittElement.from_vector(r) for r in S.basis]


def standard_borels(p: int) -> tuple[Subalgebra, Subalgebra]:
    """(B+, B-) = (g_0, span{D, xD})."""
    alg = witt_algebra(p)
    plus = Subalgebra(alg, np.eye(p, dtype=np.int64)[1:], closed=True)
    minus = Subalgebra(alg, np.eye(p, dtype=np.int64)[:2], closed=True)
    return plus, minus


def sl2_standard(p: int) -> Subalgebra:
    return Subalgebra(witt_algebra(p), np.eye(p, dtype=np.int64)[:3], closed=True)


def g0(p: int) -> Subalgebra:
    return standard_borels(p)[0]


def encode_subalgebra(S: Subalgebra) -> str:
    return ";".join(",".join(str(int(c)) for c in row) for row in S.basis)


def parse_subalgebra(text: str, p: int) -> Subalgebra:
    """Semicolon-separated element encodings, canonicalised to RREF."""
    elems = [WittElement.parse(part, p) for part in text.split(";") if part.strip()]
    if not elems:
        raise ValueError("empty subalgebra encoding")
    S = subspace(p, elems)
    S.closed = S.is_bracket_closed()
    return S


# ---------------------------------------------------------------------------
# maximality

def _complement_lines(S: Subalgebra) -> Iterator[np.ndarray]:
    """One representative per line of W_1 / S, supported on non-pivot coordinates."""
    comp = S.complement_coordinates()
    for coords in projective_points(len(comp), S.p):
        v = np.zeros(S.ambient.dim, dtype=np.int64)
        v[comp] = coords
        yield v


def _all_outside(S: Subalgebra) -> Iterator[np.ndarray]:
    for coords in product(range(S.p), repeat=S.ambient.dim):
        v = np.array(coords, dtype=np.int64)
        if v not in S:
            yield v


def _sampled_outside(S: Subalgebra, n: int, seed: int) -> Iterator[np.ndarray]:
    rng = np.random.default_rng([seed, S.p, S.dim])
    comp = S.complement_coordinates()
    for _ in range(n):
        v = np.zeros(S.ambient.dim, dtype=np.int64)
        while not v.any():
            v[comp] = rng.integers(0, S.p, size=len(comp))
        yield v


def extends_solvably(S: Subalgebra, X: np.ndarray) -> bool:
    """Whether span_closure(S ∪ {X}) is still solvable."""
    # the whole algebra is simple, so reaching full dimension settles it early
    T = lie.extend(S, [X], max_dim=S.ambient.dim - 1)
    return T is not None and is_solvable(T)


def is_maximal_solvable(S: Subalgebra, *, method: str = "auto", samples: int = 2000, seed: int = 0) -> bool:
    """No element outside S generates a solvable subalgebra together with S.

    method: "exhaustive" tries every X outside S; "cosets" one X per line of
    the quotient W_1/S (which suffices: the closure depends only on that
    line); "sample" tries ``samples`` seeded random complement vectors and
    can only refute maximality. "auto" picks cosets when affordable.
    """
    if not S.closed and not S.is_bracket_closed():
        raise NotClosed("subspace is not closed under the bracket")
    S.closed = True
    if not is_solvable(S):
        raise NotSolvable("subalgebra is not solvable")
    if method == "auto":
        lines = count_projective_points(S.ambient.dim - S.dim, S.p)
        method = "cosets" if lines <= COSET_BUDGET else "sample"
    if method == "exhaustive":
        candidates = _all_outside(S)
    elif method == "cosets":
        candidates = _complement_lines(S)
    elif method == "sample":
        candidates = _sampled_outside(S, samples, seed)
    else:
        raise ValueError(f"unknown method {method!r}")
    return not any(extends_solvably(S, X) for X in candidates)


# ---------------------------------------------------------------------------
# sl_2 triples

def _leading_lines(S: Subalgebra) -> Iterator[np.ndarray]:
    """Elements with k_{-1} = 1, one per line of S not inside g_0."""
    if not S.dim or S.pivots[0] != 0:
        return
    head, rest = S.basis[0], S.basis[1:]
    for coords in product(range(S.p), repeat=len(rest)):
        yield (head + np.asarray(coords, dtype=np.int64) @ rest) % S.p if len(rest) else head


def find_sl2_triple(S: Subalgebra) -> tuple[WittElement, WittElement, WittElement] | None:
    """A triple (e, h, f) in S conjugate to (-D, -2xD, x^2D), or None.

    [h, e] = 2e, [h, f] = -2f, [e, f] = h. Any conjugate of the standard
    triple has e outside g_0 and nilpotent, and the stabiliser of the line
    F.D is the torus, which preserves span{D, xD, x^2D}; so it is enough to
    normalise each nilpotent line of S outside g_0 to D and look for xD and
    x^2D in the image.
    """
    if not S.closed and not S.is_bracket_closed():
        raise NotClosed("subspace is not closed under the bracket")
    p = S.p
    std = sl2_standard(p)
    for v in _leading_lines(S):
        u = WittElement.from_vector(v)
        if not is_nilpotent(u, "operator"):
            continue
        tau, _ = torus_normalize(u)
        if apply_subalgebra(tau, S).contains_subspace(std):
            back = invert_aut(tau)
            e = apply(back, WittElement.basis(p, 0, -1))
            h = apply(back, WittElement.basis(p, 1, -2))
            f = apply(back, WittElement.basis(p, 2, 1))
            return e, h, f
    return None


def sl2_detect(S: Subalgebra) -> bool:
    return find_sl2_triple(S) is not None


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class BorelClass:
    """Conjugacy class of a Borel subalgebra B: apply(witness, B) is the standard one."""

    tag: str
    witness: Automorphism

    def to_dict(self) -> dict:
        return {"class": self.tag, "witness": self.witness.encode()}


def classify_borel(B: Subalgebra, *, check_maximal: bool = True) -> BorelClass:
    """Conjugate a Borel subalgebra of W_1 onto B+ or B-.

    With ``check_maximal`` false the caller vouches for maximality (e.g. B is
    a known conjugate of a standard Borel); closedness and solvability are
    always checked. The returned witness is verified before returning.
    """
    p = B.p
    if not B.closed and not B.is_bracket_closed():
        raise NotBorel("not closed under the bracket")
    B.closed = True
    if not is_solvable(B):
        raise NotBorel("not solvable")
    if check_maximal and not is_maximal_solvable(B):
        raise NotBorel("not maximal among solvable subalgebras")
    plus, minus = standard_borels(p)
    identity = Automorphism.identity(p)
    if plus.contains_subspace(B):
        if B != plus:
            raise NotBorel("properly contained in the solvable subalgebra g_0")
        return BorelClass(PLUS, identity)
    for v in B.line_representatives():
        u = WittElement.from_vector(v)
        if u.k(-1) == 0 or not is_nilpotent(u, "operator"):
            continue
        tau, _ = torus_normalize(u)
        if apply_subalgebra(tau, B) == minus:
            return BorelClass(MINUS, tau)
    raise ClassificationFailed("no nilpotent element outside g_0 conjugates B onto B-")


def verify_class(B: Subalgebra, cls: BorelClass) -> bool:
    plus, minus = standard_borels(B.p)
    return apply_subalgebra(cls.witness, B) == (plus if cls.tag == PLUS else minus)


__all__ = [
    "BorelClass", "MINUS", "PLUS", "classify_borel", "derived_series", "elements_of",
    "encode_subalgebra", "find_sl2_triple", "is_maximal_solvable", "is_solvable",
    "parse_subalgebra", "sl2_detect", "span_closure", "standard_borels", "subspace",
]
