"""The nilpotent cone N = {X : X^{[p]} = 0} of W_1.

Three independent membership tests are provided (operator power, the
determinant f, and the closed recursion on the l-sequence), together with
the parameterisation of the open orbit G.D, normalisation of elements with
leading coefficient 1 to D + c x^{p-1} D, and exhaustive or sampled cone
censuses that cross-check all three tests.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterator, Sequence

import numpy as np

from .autgroup import Automorphism, apply, compose_aut
from .errors import BudgetExceeded, CertificationFailed, NotNormalizable, ZeroLeadingCoefficient
from .field import inv, inverse_table
from .witt import WittElement, f_det, f_det_batch, p_power, p_power_batch

METHODS = ("recursive", "determinant", "operator")
EXHAUSTIVE_MAX_P = 7
SAMPLE_BLOCK = 4096
ENUM_CHUNK = 1 << 16

LSequence = tuple  # (l_1, ..., l_{p-2})


def l_sequence(k: Sequence[int], p: int) -> LSequence:
    """l_1 = k_0/2 and l_i = (i k_{i-1} + sum_{j<=i-2} (2j+1-i) k_j l_{i-1-j}) / (i+1).

    ``k`` is (k_0, ..., k_{p-3}).
    """
    if len(k) != p - 2:
        raise ValueError(f"expected {p - 2} coefficients, got {len(k)}")
    l = [0] * (p - 1)  # l[i] for 1 <= i <= p-2
    l[1] = k[0] * inv(2, p) % p
    for i in range(2, p - 1):
        s = i * k[i - 1] + sum((2 * j + 1 - i) * k[j] * l[i - 1 - j] for j in range(i - 1))
        l[i] = s * inv(i + 1, p) % p
    return tuple(l[1:])


def _closure_value(k: Sequence[int], l: LSequence, p: int) -> int:
    """sum_{i=0}^{p-3} 2(i+1) k_i l_{p-2-i}."""
    return sum(2 * (i + 1) * k[i] * l[p - 3 - i] for i in range(p - 2)) % p


def nilpotency_condition(k: Sequence[int], p: int) -> bool:
    """Whether D + sum_{i=0}^{p-2} k_i x^{i+1} D is nilpotent; ``k`` = (k_0, ..., k_{p-2})."""
    if len(k) != p - 1:
        raise ValueError(f"expected {p - 1} coefficients, got {len(k)}")
    k = [c % p for c in k]
    l = l_sequence(k[:-1], p)
    return k[-1] == _closure_value(k, l, p)


def is_nilpotent(X: WittElement, method: str = "operator") -> bool:
    if method == "operator":
        return not p_power(X)
    if method == "determinant":
        return f_det(X) == 0
    if method == "recursive":
        lead = X.k(-1)
        if lead == 0:
            # N ∩ g_0 = g_1
            return X.k(0) == 0
        Y = apply(Automorphism.scaling(X.p, lead), X)
        return nilpotency_condition(Y.coeffs[1:], X.p)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def orbit_param(a: int, kappa: Sequence[int], p: int) -> WittElement:
    """a D + sum_i a^{-i} kappa_i x^{i+1} D with kappa_{p-2} fixed by the closure condition."""
    a %= p
    if a == 0:
        raise ZeroLeadingCoefficient("a must be nonzero")
    if len(kappa) != p - 2:
        raise ValueError(f"expected {p - 2} free coefficients, got {len(kappa)}")
    kappa = [c % p for c in kappa]
    full = kappa + [_closure_value(kappa, l_sequence(kappa, p), p)]
    ainv = inv(a, p)
    return WittElement((a,) + tuple(pow(ainv, i, p) * full[i] for i in range(p - 1)))


def in_orbit_GD(X: WittElement) -> bool:
    return X.k(-1) != 0 and is_nilpotent(X, "operator")


@dataclass(frozen=True)
class NormalForm:
    """apply(sigma, X) = D + c x^{p-1} D with sigma unipotent; c = 0 iff X is nilpotent."""

    sigma: Automorphism
    c: int

    def target(self) -> WittElement:
        p = self.sigma.p
        return WittElement((1,) + (0,) * (p - 2) + (self.c,))


def normalize_to_D(X: WittElement) -> NormalForm:
    """Conjugate X = D + ... into D + c x^{p-1} D by unipotent substitutions.

    Step m (m = 2, ..., p-1) applies x -> x + t x^m, which shifts the
    coefficient of x^{m-1} D by -m t and leaves lower degrees alone.
    """
    p = X.p
    if X.k(-1) != 1:
        raise NotNormalizable("leading coefficient k_{-1} must be 1; torus-scale first")
    sigma = Automorphism.identity(p)
    cur = X
    for m in range(2, p):
        t = cur.coeffs[m - 1] * inv(m, p) % p
        if t:
            step = [1] + [0] * (p - 2)
            step[m - 1] = t
            step_aut = Automorphism(tuple(step))
            cur = apply(step_aut, cur)
            sigma = compose_aut(step_aut, sigma)
    form = NormalForm(sigma, cur.coeffs[p - 1])
    if apply(sigma, X) != form.target():
        raise CertificationFailed("normalising substitution does not reach D + c x^{p-1} D")
    return form


def torus_normalize(X: WittElement) -> tuple[Automorphism, int]:
    """An automorphism tau and c with apply(tau, X) = D + c x^{p-1} D, for k_{-1}(X) != 0.

    tau is the unipotent normaliser composed after the torus scaling by k_{-1}.
    """
    lead = X.k(-1)
    if lead == 0:
        raise NotNormalizable("element lies in g_0")
    scale = Automorphism.scaling(X.p, lead)
    form = normalize_to_D(apply(scale, X))
    return compose_aut(form.sigma, scale), form.c


# ---------------------------------------------------------------------------
# vectorised criteria

def l_sequence_batch(k: np.ndarray, p: int) -> np.ndarray:
    """Rows of (l_1, ..., l_{p-2}) for rows k = (k_0, ..., k_{p-3})."""
    k = np.asarray(k, dtype=np.int64)
    table = inverse_table(p)
    l = np.zeros((k.shape[0], p - 1), dtype=np.int64)
    l[:, 1] = k[:, 0] * table[2] % p
    for i in range(2, p - 1):
        s = i * k[:, i - 1]
        for j in range(i - 1):
            s = s + (2 * j + 1 - i) * k[:, j] * l[:, i - 1 - j]
        l[:, i] = s % p * table[i + 1] % p
    return l[:, 1:]


def closure_value_batch(k: np.ndarray, p: int) -> np.ndarray:
    """The value k_{p-2} must take, from rows k = (k_0, ..., k_{p-3})."""
    l = l_sequence_batch(k, p)
    weights = 2 * np.arange(1, p - 1)
    return (weights * k[:, : p - 2] * l[:, ::-1]).sum(axis=1) % p


def recursive_batch(c: np.ndarray) -> np.ndarray:
    """Recursive nilpotency test for coefficient rows c (N, p)."""
    c = np.asarray(c, dtype=np.int64)
    p = c.shape[1]
    lead = c[:, 0]
    # torus scaling x^{i+1}D -> a^i x^{i+1}D with a = k_{-1} (the identity on k_{-1} = 0 rows)
    a = np.where(lead == 0, 1, lead)
    scaled = np.empty((c.shape[0], p - 1), dtype=np.int64)
    apow = np.ones_like(a)
    for i in range(p - 1):
        scaled[:, i] = apow * c[:, i + 1] % p
        apow = apow * a % p
    cond = closure_value_batch(scaled[:, : p - 2], p) == scaled[:, p - 2]
    return np.where(lead == 0, c[:, 1] == 0, cond)


def orbit_param_batch(a: np.ndarray, kappa: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64) % p
    kappa = np.asarray(kappa, dtype=np.int64) % p
    if (a == 0).any():
        raise ZeroLeadingCoefficient("a must be nonzero")
    full = np.hstack([kappa, closure_value_batch(kappa, p)[:, None]])
    ainv = inverse_table(p)[a]
    out = np.empty((a.shape[0], p), dtype=np.int64)
    out[:, 0] = a
    apow = np.ones_like(a)
    for i in range(p - 1):
        out[:, i + 1] = apow * full[:, i] % p
        apow = apow * ainv % p
    return out


def encode_batch(c: np.ndarray) -> np.ndarray:
    """Integer key sum_a c_a p^a (k_{-1} least significant): the enumeration index."""
    c = np.asarray(c, dtype=np.int64)
    p = c.shape[1]
    return c @ (p ** np.arange(p, dtype=np.int64))


def decode_range(start: int, stop: int, p: int) -> np.ndarray:
    """Coefficient rows for enumeration indices start..stop-1 (odometer order)."""
    idx = np.arange(start, stop, dtype=np.int64)
    return (idx[:, None] // (p ** np.arange(p, dtype=np.int64))) % p


def criteria_batch(c: np.ndarray) -> dict[str, np.ndarray]:
    """All three nilpotency verdicts plus the raw p-power and f values."""
    c = np.asarray(c, dtype=np.int64)
    pp = p_power_batch(c)
    f = f_det_batch(c)
    return {
        "operator": ~pp.any(axis=1),
        "determinant": f == 0,
        "recursive": recursive_batch(c),
        "p_power": pp,
        "f": f,
    }


# ---------------------------------------------------------------------------
# census

@dataclass
class ConeReport:
    p: int
    mode: str
    total_checked: int = 0
    cone_size: int = 0
    orbit_size: int = 0
    g1_size: int = 0
    criteria_disagreements: int = 0
    seed: int | None = None
    n: int | None = None

    def __add__(self, other: ConeReport) -> ConeReport:
        out = ConeReport(self.p, self.mode, seed=self.seed, n=self.n)
        for name in ("total_checked", "cone_size", "orbit_size", "g1_size", "criteria_disagreements"):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        return out

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        if self.mode != "sample":
            d.pop("seed")
            d.pop("n")
        return d

    @property
    def ok(self) -> bool:
        ok = self.criteria_disagreements == 0
        if self.mode == "exhaustive":
            ok = ok and self.cone_size == self.orbit_size + self.g1_size
        return ok


def tally(c: np.ndarray, p: int, mode: str) -> ConeReport:
    v = criteria_batch(c)
    nil = v["operator"]
    disagree = (nil != v["determinant"]) | (nil != v["recursive"])
    lead_nonzero = c[:, 0] != 0
    in_g1 = (c[:, 0] == 0) & (c[:, 1] == 0)
    return ConeReport(
        p=p,
        mode=mode,
        total_checked=int(c.shape[0]),
        cone_size=int(nil.sum()),
        orbit_size=int((nil & lead_nonzero).sum()),
        g1_size=int(in_g1.sum()),
        criteria_disagreements=int(disagree.sum()),
    )


def _enum_shard(args) -> ConeReport:
    p, start, stop = args
    return tally(decode_range(start, stop, p), p, "exhaustive")


def sample_block(p: int, seed: int, block: int) -> np.ndarray:
    """Block ``block`` of the sample stream: a pure function of (seed, block)."""
    rng = np.random.default_rng([seed, block])
    return rng.integers(0, p, size=(SAMPLE_BLOCK, p), dtype=np.int64)


def sample_elements(p: int, n: int, seed: int) -> Iterator[np.ndarray]:
    """The first n elements of the seeded sample stream, block by block."""
    for b in range(-(-n // SAMPLE_BLOCK)):
        rows = sample_block(p, seed, b)
        yield rows[: min(SAMPLE_BLOCK, n - b * SAMPLE_BLOCK)]


def _sample_shard(args) -> ConeReport:
    p, n, seed, b = args
    rows = sample_block(p, seed, b)[: min(SAMPLE_BLOCK, n - b * SAMPLE_BLOCK)]
    return tally(rows, p, "sample")


def default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def _fold(worker, tasks: list, jobs: int, empty: ConeReport) -> ConeReport:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(worker, tasks))
    else:
        parts = [worker(t) for t in tasks]
    out = empty
    for part in parts:
        out = out + part
    return out


def enumerate_cone(p: int, *, jobs: int = 1) -> ConeReport:
    """Classify every element of W_1 (p <= 7)."""
    if p > EXHAUSTIVE_MAX_P:
        raise BudgetExceeded(f"exhaustive enumeration is limited to p <= {EXHAUSTIVE_MAX_P}")
    total = p**p
    tasks = [(p, s, min(s + ENUM_CHUNK, total)) for s in range(0, total, ENUM_CHUNK)]
    return _fold(_enum_shard, tasks, jobs, ConeReport(p, "exhaustive"))


def sample_cone(p: int, n: int, seed: int, *, jobs: int = 1) -> ConeReport:
    tasks = [(p, n, seed, b) for b in range(-(-n // SAMPLE_BLOCK))]
    return _fold(_sample_shard, tasks, jobs, ConeReport(p, "sample", seed=seed, n=n))
