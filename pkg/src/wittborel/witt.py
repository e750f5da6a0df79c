"""The Witt algebra W_1 = Der(F_p[x]/(x^p)).

An element X = sum_{i=-1}^{p-2} k_i x^{i+1} D is stored as the tuple
``coeffs`` with ``coeffs[a]`` the coefficient of x^a D, i.e. coeffs[a] = k_{a-1}.
The basis order (D, xD, ..., x^{p-1}D) is used for every matrix, vector and
text encoding.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import linalg
from .errors import NotADerivation
from .lie import LieAlgebra
from .truncpoly import TruncPoly, mul_trunc, apply_D


@dataclass(frozen=True)
class WittElement:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        p = len(self.coeffs)
        object.__setattr__(self, "coeffs", tuple(int(c) % p for c in self.coeffs))

    @property
    def p(self) -> int:
        return len(self.coeffs)

    def k(self, i: int) -> int:
        """Coefficient k_i of x^{i+1}D; zero outside -1..p-2."""
        return self.coeffs[i + 1] if -1 <= i <= self.p - 2 else 0

    @classmethod
    def zero(cls, p: int) -> WittElement:
        return cls((0,) * p)

    @classmethod
    def basis(cls, p: int, a: int, c: int = 1) -> WittElement:
        """c * x^a D."""
        v = [0] * p
        v[a] = c
        return cls(tuple(v))

    @classmethod
    def from_k(cls, ks: Sequence[int]) -> WittElement:
        """From (k_{-1}, k_0, ..., k_{p-2})."""
        return cls(tuple(ks))

    @classmethod
    def parse(cls, text: str, p: int | None = None) -> WittElement:
        parts = [s.strip() for s in text.split(",")]
        if p is not None and len(parts) != p:
            raise ValueError(f"expected {p} comma-separated residues, got {len(parts)}")
        return cls(tuple(int(s) for s in parts))

    def encode(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    def vector(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    @classmethod
    def from_vector(cls, v) -> WittElement:
        return cls(tuple(int(c) for c in np.asarray(v).ravel()))

    def __add__(self, other: WittElement) -> WittElement:
        return WittElement(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: WittElement) -> WittElement:
        return WittElement(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> WittElement:
        return WittElement(tuple(-a for a in self.coeffs))

    def __mul__(self, c: int) -> WittElement:
        return WittElement(tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def in_filtration(self, i: int) -> bool:
        """Membership in g_i = span{x^{j+1}D : j >= i}."""
        return not any(self.coeffs[: i + 1])

    def __str__(self) -> str:
        names = ["D", "xD"] + [f"x^{a}D" for a in range(2, self.p)]
        terms = [f"{c}*{n}" if c != 1 else n for c, n in zip(self.coeffs, names) if c]
        return " + ".join(terms) or "0"


def bracket(X: WittElement, Y: WittElement) -> WittElement:
    """[x^a D, x^b D] = (b - a) x^{a+b-1} D, extended bilinearly."""
    p = X.p
    assert Y.p == p, "mixed characteristics"
    out = [0] * p
    for a, u in enumerate(X.coeffs):
        if not u:
            continue
        for b, v in enumerate(Y.coeffs):
            if v and 0 <= a + b - 1 < p:
                out[a + b - 1] += (b - a) * u * v
    return WittElement(tuple(out))


def as_poly(X: WittElement) -> TruncPoly:
    """The coefficient function g with X = g(x) D."""
    return TruncPoly(X.coeffs)


def act_on(X: WittElement, f: TruncPoly) -> TruncPoly:
    assert X.p == f.p, "mixed characteristics"
    return mul_trunc(as_poly(X), apply_D(f))


@lru_cache(maxsize=None)
def structure_constants(p: int) -> np.ndarray:
    t = np.zeros((p, p, p), dtype=np.int64)
    for a in range(p):
        for b in range(p):
            if 0 <= a + b - 1 < p:
                t[a, b, a + b - 1] = (b - a) % p
    t.setflags(write=False)
    return t


def _operator(v: np.ndarray) -> np.ndarray:
    return matrix_rep_batch(np.asarray(v)[None])[0]


@lru_cache(maxsize=None)
def witt_algebra(p: int) -> LieAlgebra:
    """W_1 as a structure-constant algebra; basis vector a is x^a D of degree a-1."""
    return LieAlgebra(
        name=f"W1(p={p})",
        p=p,
        table=structure_constants(p),
        degrees=np.arange(-1, p - 1),
        operator=_operator,
    )


def matrix_rep(X: WittElement) -> np.ndarray:
    """Matrix of X on A; column j holds the coordinates of X(x^j)."""
    return matrix_rep_batch(X.vector()[None])[0]


def matrix_rep_batch(c: np.ndarray) -> np.ndarray:
    """Stacked matrix_rep for coefficient rows c of shape (N, p)."""
    c = np.asarray(c, dtype=np.int64)
    n, p = c.shape
    m = np.zeros((n, p, p), dtype=np.int64)
    for j in range(1, p):
        # X(x^j) = sum_a c_a x^a * j x^{j-1}
        for a in range(p - j + 1):
            m[:, a + j - 1, j] = j * c[:, a]
    return m % p


def from_matrix_batch(m: np.ndarray) -> np.ndarray:
    """Read the derivation back from its matrix: X(x) is column 1."""
    return np.ascontiguousarray(m[:, :, 1])


def p_power_batch(c: np.ndarray, *, check: bool = True) -> np.ndarray:
    """X^{[p]} for each row of c, via the p-th power of the matrix on A."""
    c = np.asarray(c, dtype=np.int64)
    p = c.shape[1]
    mp = linalg.matpow(matrix_rep_batch(c), p, p)
    out = from_matrix_batch(mp)
    if check and not np.array_equal(matrix_rep_batch(out), mp):
        raise NotADerivation("p-th power of a derivation matrix is not a derivation matrix")
    return out


def p_power(X: WittElement) -> WittElement:
    return WittElement.from_vector(p_power_batch(X.vector()[None])[0])


def f_matrix_batch(c: np.ndarray) -> np.ndarray:
    """The (p-1)x(p-1) matrices with entry (i, j) = j * k_{i-j}, indices from 1."""
    c = np.asarray(c, dtype=np.int64)
    n, p = c.shape
    m = np.zeros((n, p - 1, p - 1), dtype=np.int64)
    for i in range(1, p):
        for j in range(1, p):
            a = i - j + 1  # k_{i-j} sits at coeffs[i-j+1]
            if 0 <= a < p:
                m[:, i - 1, j - 1] = j * c[:, a]
    return m % p


def f_det_batch(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64)
    return linalg.det(f_matrix_batch(c), c.shape[1])


def f_det(X: WittElement) -> int:
    return int(f_det_batch(X.vector()[None])[0])


def restriction_scalar(X: WittElement) -> int:
    """psi_0 with X^{[p]} = psi_0 X, namely -f(X)."""
    return -f_det(X) % X.p


def char_poly_eval(X: WittElement, lam: int) -> int:
    """lam^p + f(X) lam, the characteristic polynomial of X on A at lam."""
    return int(char_poly_eval_batch(X.vector()[None], lam)[0])


def char_poly_eval_batch(c: np.ndarray, lam: int) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64)
    p = c.shape[1]
    return (pow(lam, p, p) + f_det_batch(c) * lam) % p


def ad_power_batch(c: np.ndarray, e: int) -> np.ndarray:
    """ad(X)^e on W_1 (column convention) for each row of c."""
    c = np.asarray(c, dtype=np.int64)
    p = c.shape[1]
    ad = witt_algebra(p).ad(c)
    return linalg.matpow(ad, e, p)

