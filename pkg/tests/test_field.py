import math

import pytest

from wittborel.errors import CharacteristicTooSmall, DivisionByZero, NonPrime
from wittborel.field import factorial_mod, inv, inverse_table, make_prime


@pytest.mark.parametrize("p", [5, 7, 11, 13, 101])
def test_make_prime_accepts(p):
    assert make_prime(p) == p


@pytest.mark.parametrize("n", [0, 1, 4, 9, 15, 25])
def test_make_prime_rejects_composites(n):
    with pytest.raises(NonPrime):
        make_prime(n)


@pytest.mark.parametrize("p", [2, 3])
def test_small_characteristic_is_rejected(p):
    with pytest.raises(CharacteristicTooSmall, match="p > 3"):
        make_prime(p)


@pytest.mark.parametrize("p", [5, 7, 13])
def test_inverse_against_search(p):
    for a in range(1, p):
        b = next(b for b in range(1, p) if a * b % p == 1)
        assert inv(a, p) == b
        assert inverse_table(p)[a] == b


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        inv(0, 7)
    with pytest.raises(ZeroDivisionError):
        inv(14, 7)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_factorial_and_wilson(p):
    for n in range(p):
        assert factorial_mod(n, p) == math.factorial(n) % p
    assert factorial_mod(p - 1, p) == p - 1
