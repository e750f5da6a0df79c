"""The truncated polynomial algebra A = F_p[x]/(x^p).

Elements are coefficient tuples of length exactly p, so p is implied by
the length and truncation is structural.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NonNilpotentSubstituend, NotInvertible
from .field import inv


@dataclass(frozen=True)
class TruncPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        p = len(self.coeffs)
        object.__setattr__(self, "coeffs", tuple(int(c) % p for c in self.coeffs))

    @property
    def p(self) -> int:
        return len(self.coeffs)

    @classmethod
    def zero(cls, p: int) -> TruncPoly:
        return cls((0,) * p)

    @classmethod
    def monomial(cls, p: int, i: int, c: int = 1) -> TruncPoly:
        v = [0] * p
        if i < p:
            v[i] = c
        return cls(tuple(v))

    @classmethod
    def from_list(cls, p: int, coeffs: Sequence[int]) -> TruncPoly:
        """Pad (or truncate) a low-to-high coefficient list to length p."""
        v = list(coeffs)[:p] + [0] * max(0, p - len(coeffs))
        return cls(tuple(v))

    def __add__(self, other: TruncPoly) -> TruncPoly:
        return TruncPoly(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: TruncPoly) -> TruncPoly:
        return TruncPoly(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> TruncPoly:
        return TruncPoly(tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, TruncPoly):
            return mul_trunc(self, other)
        return TruncPoly(tuple(a * other for a in self.coeffs))

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __str__(self) -> str:
        terms = [f"{c}*x^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


def _mul(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    out = [0] * p
    for i, a in enumerate(f):
        if a:
            for j in range(p - i):
                b = g[j]
                if b:
                    out[i + j] += a * b
    return [c % p for c in out]


def mul_trunc(f: TruncPoly, g: TruncPoly) -> TruncPoly:
    assert f.p == g.p, "mixed characteristics"
    return TruncPoly(tuple(_mul(f.coeffs, g.coeffs, f.p)))


def apply_D(f: TruncPoly) -> TruncPoly:
    """D x^i = i x^{i-1}."""
    c = f.coeffs
    return TruncPoly(tuple(i * c[i] for i in range(1, f.p)) + (0,))


def powers(g: TruncPoly) -> list[list[int]]:
    """[g^0, g^1, ..., g^{p-1}] as coefficient lists."""
    p = g.p
    out = [[1] + [0] * (p - 1)]
    for _ in range(1, p):
        out.append(_mul(out[-1], g.coeffs, p))
    return out


def substitution_matrix(g: TruncPoly) -> np.ndarray:
    """Matrix of f -> f(g(x)) on the basis 1, x, ..., x^{p-1} (column j = g^j)."""
    if g.coeffs[0]:
        raise NonNilpotentSubstituend("substituend must have zero constant term")
    return np.array(powers(g), dtype=np.int64).T


def substitute(f: TruncPoly, g: TruncPoly) -> TruncPoly:
    """f(g(x)) mod x^p; g must lie in the maximal ideal (x)."""
    assert f.p == g.p, "mixed characteristics"
    if g.coeffs[0]:
        raise NonNilpotentSubstituend("substituend must have zero constant term")
    p = f.p
    acc = [0] * p
    for c in reversed(f.coeffs):  # Horner
        acc = _mul(acc, g.coeffs, p)
        acc[0] = (acc[0] + c) % p
    return TruncPoly(tuple(acc))


def comp_inverse(g: TruncPoly) -> TruncPoly:
    """The h with h(g(x)) = x = g(h(x)), solved one degree at a time."""
    p = g.p
    if g.coeffs[0]:
        raise NonNilpotentSubstituend("substituend must have zero constant term")
    if g.coeffs[1] == 0:
        raise NotInvertible("linear coefficient is zero")
    gp = powers(g)
    lead = inv(g.coeffs[1], p)
    h = [0] * p
    # coefficient of x^d in sum_j h_j g^j only involves h_1..h_d (g^j starts at x^j)
    for d in range(1, p):
        target = 1 if d == 1 else 0
        s = sum(h[j] * gp[j][d] for j in range(1, d))
        h[d] = (target - s) * pow(lead, d, p) % p
    return TruncPoly(tuple(h))
