import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erdos_straus.arith import (
    Congruence,
    IncompatibleCongruences,
    ceil_div,
    crt_solve,
    divisors,
    factorize,
    gcd,
    is_perfect_square,
    is_prime,
    jacobi,
    lcm_list,
    small_primes,
)


def _trial_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def _euler_legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def test_small_values():
    assert gcd(12, 18) == 6
    assert gcd(3, 1) == 1
    assert gcd(0, 7) == 7
    assert lcm_list([3, 7]) == 21
    assert lcm_list([3, 2]) == 6
    assert lcm_list([]) == 1
    assert ceil_div(85, 3) == 29
    assert ceil_div(10, 5) == 2
    assert ceil_div(102, 7) == 15
    assert ceil_div(-7, 2) == -3


def test_bad_arguments():
    with pytest.raises(ValueError):
        lcm_list([3, 0])
    with pytest.raises(ValueError):
        ceil_div(1, 0)
    with pytest.raises(ValueError):
        jacobi(3, 8)
    with pytest.raises(ValueError):
        jacobi(3, -5)
    with pytest.raises(ValueError):
        Congruence(4, 4)


def test_is_prime_examples():
    assert not is_prime(2009)
    assert is_prime(17)
    assert not is_prime(1)
    assert not is_prime(0)
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert is_prime(18446744073709551557)  # largest 64-bit prime


def test_is_prime_matches_sieve():
    limit = 10**6
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    assert all(is_prime(n) == bool(sieve[n]) for n in range(limit + 1))


def test_small_primes():
    assert small_primes(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert small_primes(1100)[-1] == 1097
    assert all(_trial_prime(p) for p in small_primes(1100))


def test_jacobi_examples():
    assert jacobi(-1, 7) == -1
    assert jacobi(2, 15) == 1
    assert jacobi(6, 15) == 0
    assert jacobi(5, 1) == 1


def test_jacobi_matches_euler_products():
    for m in range(1, 2001, 2):
        fac = factorize(m) if m > 1 else {}
        for n in range(m):
            want = 1
            for p, e in fac.items():
                want *= _euler_legendre(n, p) ** e
            assert jacobi(n, m) == want, (n, m)


def test_jacobi_multiplicative():
    for m in range(1, 120, 2):
        for m2 in range(1, 120, 2):
            for n in (-7, -1, 2, 3, 10, 31):
                if math.gcd(n, m * m2) == 1:
                    assert jacobi(n, m) * jacobi(n, m2) == jacobi(n, m * m2)


def test_reciprocity():
    for n in range(3, 300, 2):
        for m in range(3, 300, 2):
            if math.gcd(n, m) == 1:
                sign = -1 if ((n - 1) // 2) * ((m - 1) // 2) % 2 else 1
                assert jacobi(n, m) * jacobi(m, n) == sign


def test_perfect_squares():
    assert is_perfect_square(25)
    assert is_perfect_square(49)
    assert not is_perfect_square(2009)
    assert not is_perfect_square(-4)
    for k in range(1, 10**6 + 1, 997):
        assert is_perfect_square(k * k)
        assert not is_perfect_square(k * k + 1)
    big = 10**40 + 7
    assert is_perfect_square(big * big) and not is_perfect_square(big * big - 1)


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(49) == [1, 7, 49]
    assert divisors(2009) == [1, 7, 41, 49, 287, 2009]
    assert divisors(1) == [1]
    for n in range(1, 3000):
        assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]


@given(st.integers(min_value=1, max_value=10**30))
@settings(max_examples=200, deadline=None)
def test_factorize_roundtrip(n):
    fac = factorize(n)
    assert math.prod(p**e for p, e in fac.items()) == n
    assert all(is_prime(p) for p in fac)


def test_factorize_semiprime():
    p, q = 1000003, 998244353
    assert factorize(p * q) == {p: 1, q: 1}


def test_crt_examples():
    assert crt_solve([Congruence(3, 2), Congruence(7, 5)]) == Congruence(21, 5)
    assert crt_solve([Congruence(5, 3)]) == Congruence(5, 3)
    with pytest.raises(IncompatibleCongruences) as info:
        crt_solve([Congruence(4, 1), Congruence(6, 2)])
    assert info.value.pair == (Congruence(4, 1), Congruence(6, 2))
    with pytest.raises(ValueError):
        crt_solve([])


@given(st.lists(st.tuples(st.integers(1, 400), st.integers(0, 10**6)), min_size=1, max_size=6))
@settings(max_examples=300, deadline=None)
def test_crt_substitution(pairs):
    cs = [Congruence.of(m, r) for m, r in pairs]
    try:
        sol = crt_solve(cs)
    except IncompatibleCongruences as exc:
        a, b = exc.pair
        assert (a.residue - b.residue) % math.gcd(a.modulus, b.modulus)
        return
    assert sol.modulus == lcm_list([c.modulus for c in cs])
    assert all(c.contains(sol.residue) for c in cs)
