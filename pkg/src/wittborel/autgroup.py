"""Aut(W_1) realised as Aut(A): substitutions x -> phi(x) = sum a_i x^i, a_1 != 0.

phi acts on A by f -> f(phi(x)) and on W_1 by conjugation X -> phi X phi^{-1}.
With that convention ``compose_aut(phi, psi)`` is the automorphism f -> phi(psi(f)),
whose substitution polynomial is psi_poly(phi_poly(x)).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import SingularLinearPart
from .field import inv, inverse_table
from .lie import Subalgebra
from .truncpoly import TruncPoly, comp_inverse, substitute, substitution_matrix
from .witt import WittElement, act_on


@dataclass(frozen=True)
class Automorphism:
    """Substitution coefficients (a_1, ..., a_{p-1}). Immutable; derived
    matrices are computed on first use and cached on the instance."""

    a: tuple[int, ...]

    def __post_init__(self):
        p = len(self.a) + 1
        object.__setattr__(self, "a", tuple(int(c) % p for c in self.a))
        if self.a[0] == 0:
            raise SingularLinearPart("a_1 must be nonzero")

    @property
    def p(self) -> int:
        return len(self.a) + 1

    @classmethod
    def identity(cls, p: int) -> Automorphism:
        return cls((1,) + (0,) * (p - 2))

    @classmethod
    def scaling(cls, p: int, c: int) -> Automorphism:
        """The torus element x -> c x, acting by x^i D -> c^{i-1} x^i D."""
        return cls((c,) + (0,) * (p - 2))

    @classmethod
    def parse(cls, text: str, p: int | None = None) -> Automorphism:
        parts = [s.strip() for s in text.split(",")]
        if p is not None and len(parts) != p - 1:
            raise ValueError(f"expected {p - 1} comma-separated residues, got {len(parts)}")
        return cls(tuple(int(s) for s in parts))

    def encode(self) -> str:
        return ",".join(str(c) for c in self.a)

    @property
    def poly(self) -> TruncPoly:
        return TruncPoly((0,) + self.a)

    def is_unipotent(self) -> bool:
        return self.a[0] == 1

    def is_torus(self) -> bool:
        return not any(self.a[1:])

    @cached_property
    def inverse_poly(self) -> TruncPoly:
        return comp_inverse(self.poly)

    @cached_property
    def substitution_matrix(self) -> np.ndarray:
        m = substitution_matrix(self.poly)
        m.setflags(write=False)
        return m

    @cached_property
    def witt_matrix(self) -> np.ndarray:
        """Matrix of X -> phi X phi^{-1} on W_1 in the basis (D, xD, ...).

        Column a is the coefficient vector of Y with Y(x) = phi(x^a D(phi^{-1}(x))),
        which determines the derivation Y.
        """
        p = self.p
        psi = self.inverse_poly
        cols = np.array([act_on(WittElement.basis(p, a), psi).coeffs for a in range(p)], dtype=np.int64).T
        m = self.substitution_matrix @ cols % p
        m.setflags(write=False)
        return m


def from_coeffs(a: Sequence[int]) -> Automorphism:
    return Automorphism(tuple(a))


def apply(phi: Automorphism, X: WittElement) -> WittElement:
    assert phi.p == X.p, "mixed characteristics"
    return WittElement.from_vector(phi.witt_matrix @ X.vector() % X.p)


def apply_subalgebra(phi: Automorphism, S: Subalgebra) -> Subalgebra:
    """The image phi(S); closedness is preserved."""
    rows = S.basis @ phi.witt_matrix.T % S.p
    return Subalgebra(S.ambient, rows, closed=S.closed)


def compose_aut(phi: Automorphism, psi: Automorphism) -> Automorphism:
    """phi o psi, so that apply(compose_aut(phi, psi), X) = apply(phi, apply(psi, X))."""
    assert phi.p == psi.p, "mixed characteristics"
    return Automorphism(substitute(psi.poly, phi.poly).coeffs[1:])


def invert_aut(phi: Automorphism) -> Automorphism:
    return Automorphism(phi.inverse_poly.coeffs[1:])


def decompose(phi: Automorphism) -> tuple[int, Automorphism]:
    """Split phi into its torus coordinate a_1 and the unipotent phi / a_1.

    The factors satisfy compose_aut(unipotent, scaling(a_1)) == phi, i.e. the
    substitution polynomial of phi is a_1 * unipotent_poly(x).
    """
    t = phi.a[0]
    s = inv(t, phi.p)
    return t, Automorphism(tuple(c * s for c in phi.a))


def group_order(p: int) -> int:
    return (p - 1) * p ** (p - 2)


def random_automorphism(p: int, rng: np.random.Generator, *, unipotent: bool = False) -> Automorphism:
    a = rng.integers(0, p, size=p - 1)
    a[0] = 1 if unipotent else rng.integers(1, p)
    return Automorphism(tuple(int(c) for c in a))


def _trunc_mul_batch(f: np.ndarray, g: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros_like(f)
    n = f.shape[1]
    for i in range(n):
        out[:, i:] += f[:, i:i + 1] * g[:, : n - i]
    return out % p


def witt_matrix_batch(a: np.ndarray) -> np.ndarray:
    """Stacked witt_matrix for coefficient rows a of shape (N, p-1), a[:, 0] != 0."""
    a = np.asarray(a, dtype=np.int64)
    n, p = a.shape[0], a.shape[1] + 1
    phi = np.hstack([np.zeros((n, 1), dtype=np.int64), a % p])
    pw = np.zeros((n, p, p), dtype=np.int64)  # pw[:, j] = phi^j
    pw[:, 0, 0] = 1
    for j in range(1, p):
        pw[:, j] = _trunc_mul_batch(pw[:, j - 1], phi, p)
    subst = np.swapaxes(pw, 1, 2)
    # compositional inverse: sum_j h_j phi^j = x, solved degree by degree
    lead = inverse_table(p)[phi[:, 1]]
    h = np.zeros((n, p), dtype=np.int64)
    lead_pow = np.ones(n, dtype=np.int64)
    for d in range(1, p):
        lead_pow = lead_pow * lead % p
        s = (h[:, 1:d] * pw[:, 1:d, d]).sum(axis=1)
        h[:, d] = ((1 if d == 1 else 0) - s) % p * lead_pow % p
    dh = np.zeros_like(h)
    dh[:, : p - 1] = h[:, 1:] * np.arange(1, p) % p
    cols = np.zeros((n, p, p), dtype=np.int64)
    for col in range(p):
        cols[:, col:, col] = dh[:, : p - col]
    return np.matmul(subst, cols) % p
