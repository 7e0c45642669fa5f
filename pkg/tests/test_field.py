import math

import pytest

from fastdqi.errors import DivisionByZero, NotPrime
from fastdqi.field import factorize, is_prime, make_field, multiplicative_order


def brute_order(a, p):
    k, x = 1, a % p
    while x != 1:
        x = x * a % p
        k += 1
    return k


def brute_smallest_generator(p):
    return next(g for g in range(2, p) if brute_order(g, p) == p - 1)


@pytest.mark.parametrize("p,gamma", [(7, 3), (11, 2)])
def test_smallest_primitive_element(p, gamma):
    assert make_field(p).gamma == gamma == brute_smallest_generator(p)


def test_composite_rejected():
    with pytest.raises(NotPrime):
        make_field(4)
    with pytest.raises(NotPrime):
        make_field(2)


def test_primality_matches_trial_division():
    for n in range(0, 5000):
        trial = n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))
        assert is_prime(n) == trial, n


def test_large_known_primes():
    assert is_prime(2**61 - 1)
    assert is_prime(4611686018427387847)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_inverse_examples():
    F = make_field(7)
    assert F.inv(3) == 5
    assert F.pow(4, 0) == 1
    assert make_field(11).pow(2, 10) == 1
    with pytest.raises(DivisionByZero):
        F.inv(0)


def test_element_wrapper_is_canonical():
    F = make_field(13)
    a, b = F(20), F(-3)
    assert int(a) == 7 and int(b) == 10
    assert int(a * b.inv()) * 10 % 13 == 7
    assert int(a / b) == int(a * b.inv())
    assert int(-a) == 6 and int(a - b) == (7 - 10) % 13


@pytest.mark.parametrize("n,expected", [(58, [(2, 1), (29, 1)]), (65536, [(2, 16)]), (1, [])])
def test_factorize_examples(n, expected):
    assert factorize(n) == expected


def test_factorize_random(rng):
    for n in rng.integers(1, 10**9, size=200).tolist():
        fac = factorize(n)
        assert math.prod(q**e for q, e in fac) == n
        assert [q for q, _ in fac] == sorted({q for q, _ in fac})
        assert all(is_prime(q) for q, _ in fac)


def test_generator_order_exhaustive_small():
    for p in range(3, 10**4):
        if is_prime(p):
            F = make_field(p)
            assert multiplicative_order(F.gamma, p) == p - 1


def test_mul_inverse_roundtrip(rng):
    F = make_field(1_000_003)
    for a, b in rng.integers(0, F.p, size=(500, 2)).tolist():
        if b:
            assert F.mul(F.mul(a, b), F.inv(b)) == a


def test_deterministic():
    assert make_field(65537) == make_field(65537)
    assert make_field(65537).gamma == 3
