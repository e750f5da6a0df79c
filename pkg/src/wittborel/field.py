"""Arithmetic in the prime field F_p for a runtime prime p > 3.

Scalars are plain Python ints kept in ``range(p)``; the prime travels
alongside them as context.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import CharacteristicTooSmall, DivisionByZero, NonPrime


class Prime(int):
    """An int known to be a prime greater than 3. Build with :func:`make_prime`."""

    def __repr__(self) -> str:
        return f"Prime({int(self)})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def make_prime(n: int) -> Prime:
    """Validate ``n`` as a characteristic the library supports."""
    if isinstance(n, bool) or int(n) != n:
        raise NonPrime(f"{n!r} is not an integer")
    n = int(n)
    if not _is_prime(n):
        raise NonPrime(f"{n} is not prime")
    if n <= 3:
        raise CharacteristicTooSmall(
            f"characteristic p={n} is not supported: p > 3 is required "
            "(W_1 is solvable for p=2 and isomorphic to sl_2 for p=3)"
        )
    return Prime(n)


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise DivisionByZero(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def factorial_mod(n: int, p: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out = out * i % p
    return out


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    """Lookup table t with t[a] = a^{-1} mod p and t[0] = 0."""
    t = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        t[a] = pow(a, -1, p)
    t.setflags(write=False)
    return t
