"""Exact integer primitives shared by every other module.

Everything here works on Python ints, so magnitudes are unbounded and no
floating point is involved anywhere.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

__all__ = [
    "Congruence",
    "IncompatibleCongruences",
    "gcd",
    "lcm_list",
    "ceil_div",
    "is_prime",
    "jacobi",
    "is_perfect_square",
    "factorize",
    "divisors",
    "crt_solve",
    "small_primes",
]

# Deterministic Miller-Rabin: these 13 bases are exact below 3.3e24, which
# covers the 64-bit range with room to spare.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981

_TRIAL_BOUND = 1000


class IncompatibleCongruences(ValueError):
    def __init__(self, first: "Congruence", second: "Congruence"):
        self.pair = (first, second)
        super().__init__(
            f"incompatible congruences: x = {first.residue} (mod {first.modulus}) "
            f"and x = {second.residue} (mod {second.modulus})"
        )


@dataclass(frozen=True, order=True)
class Congruence:
    modulus: int
    residue: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(
                f"residue {self.residue} outside [0, {self.modulus})"
            )

    @classmethod
    def of(cls, modulus: int, residue: int) -> "Congruence":
        """Build a congruence, reducing ``residue`` into range."""
        return cls(modulus, residue % modulus)

    def contains(self, x: int) -> bool:
        return (x - self.residue) % self.modulus == 0


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def lcm_list(xs: Iterable[int]) -> int:
    xs = list(xs)
    for x in xs:
        if x <= 0:
            raise ValueError(f"lcm_list needs positive integers, got {x}")
    return math.lcm(*xs) if xs else 1


def ceil_div(num: int, den: int) -> int:
    if den <= 0:
        raise ValueError(f"ceil_div needs a positive denominator, got {den}")
    return -((-num) // den)


def _small_prime_list(bound: int) -> list[int]:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, bound + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


_SMALL_PRIMES = _small_prime_list(_TRIAL_BOUND)


def small_primes(bound: int) -> list[int]:
    """Primes up to ``bound`` (inclusive)."""
    if bound <= _TRIAL_BOUND:
        return [p for p in _SMALL_PRIMES if p <= bound]
    return _small_prime_list(bound)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 43 * 43:
        return True
    if n >= _MR_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic primality range")
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def jacobi(n: int, m: int) -> int:
    """Jacobi symbol (n/m) for odd positive m; 0 when gcd(n, m) > 1."""
    if m <= 0 or m % 2 == 0:
        raise ValueError(f"jacobi needs an odd positive modulus, got {m}")
    n %= m
    result = 1
    while n:
        while n % 2 == 0:
            n //= 2
            if m % 8 in (3, 5):
                result = -result
        n, m = m, n
        if n % 4 == 3 and m % 4 == 3:
            result = -result
        n %= m
    return result if m == 1 else 0


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _pollard_rho(n: int, rng: random.Random) -> int:
    # Brent's variant; n is odd, composite and has no factor below _TRIAL_BOUND.
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as ``{prime: exponent}``."""
    if n <= 0:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return out
    stack = [n]
    # Seeded so factorizations are reproducible run to run.
    rng = random.Random(n)
    while stack:
        m = stack.pop()
        if m < _TRIAL_BOUND * _TRIAL_BOUND or is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m, rng)
        stack.extend((d, m // d))
    return dict(sorted(out.items()))


def divisors(n: int) -> list[int]:
    if n <= 0:
        raise ValueError(f"divisors needs a positive integer, got {n}")
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def crt_solve(congruences: Sequence[Congruence]) -> Congruence:
    """Combine pairwise-compatible congruences into one modulo their lcm."""
    if not congruences:
        raise ValueError("crt_solve needs at least one congruence")

    # Check every pair up front so the error names the offending pair even
    # when the incremental merge would only notice it later.
    for i, a in enumerate(congruences):
        for b in congruences[i + 1 :]:
            if (a.residue - b.residue) % math.gcd(a.modulus, b.modulus):
                raise IncompatibleCongruences(a, b)

    def merge(acc: Congruence, c: Congruence) -> Congruence:
        g = math.gcd(acc.modulus, c.modulus)
        m1 = acc.modulus // g
        m2 = c.modulus // g
        # acc.residue + acc.modulus * t = c.residue (mod c.modulus)
        t = (c.residue - acc.residue) // g * pow(m1, -1, m2) % m2 if m2 > 1 else 0
        mod = acc.modulus * m2
        return Congruence(mod, (acc.residue + acc.modulus * t) % mod)

    return reduce(merge, congruences[1:], congruences[0])
