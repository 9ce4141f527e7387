"""Closed-form Egyptian-fraction identities for 4/n and their checkers.

A :class:`Decomposition` is the unit every other module passes around: it
records n and two or three denominators and can always be re-verified with
one exact integer identity, whatever produced it.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .arith import factorize

__all__ = [
    "Kind",
    "Decomposition",
    "Family",
    "ParamWitness",
    "PreconditionError",
    "classify",
    "verify_decomposition",
    "two_term_for_3",
    "two_term_for_4_3mod4",
    "split_unit_fraction",
    "type1_from_abc",
    "p_poly",
    "q_poly",
    "check_witness",
    "system_holds",
    "shift_witness",
]


class PreconditionError(ValueError):
    pass


class Kind(str, enum.Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    TWO_TERM = "TwoTerm"
    GENERAL = "General"


def classify(n: int, x: int, y: int, z: Optional[int]) -> Kind:
    """Kind by how many of the denominators n divides."""
    if z is None:
        return Kind.TWO_TERM
    hits = sum(1 for d in (x, y, z) if d % n == 0)
    return {1: Kind.TYPE_I, 2: Kind.TYPE_II}.get(hits, Kind.GENERAL)


@dataclass(frozen=True)
class Decomposition:
    """``numerator/n = 1/x + 1/y (+ 1/z)``; numerator is 4 unless stated."""

    n: int
    x: int
    y: int
    z: Optional[int] = None
    kind: Optional[Kind] = None
    numerator: int = 4

    def __post_init__(self):
        if self.kind is None:
            object.__setattr__(self, "kind", classify(self.n, self.x, self.y, self.z))

    @property
    def denominators(self) -> tuple[int, ...]:
        return (self.x, self.y) if self.z is None else (self.x, self.y, self.z)

    def scaled(self, k: int) -> "Decomposition":
        """Decomposition of numerator/(k*n) obtained by scaling each denominator."""
        z = None if self.z is None else self.z * k
        return Decomposition(self.n * k, self.x * k, self.y * k, z, numerator=self.numerator)


def verify_decomposition(d: Decomposition) -> bool:
    n, x, y, z, a = d.n, d.x, d.y, d.z, d.numerator
    if n < 1 or x < 1 or y < 1 or (z is not None and z < 1):
        return False
    if z is None:
        return a * x * y == n * (x + y)
    return a * x * y * z == n * (x * y + y * z + z * x)


def two_term_for_3(n: int) -> Optional[Decomposition]:
    """Solve 3/n = 1/x + 1/y, or return None when no solution exists.

    A solution exists exactly when n has a divisor m that is 0 or 2 mod 3.
    For 3 | n write k = n/3 and split 1/k; otherwise use the smallest
    divisor m = 2 (mod 3): 3/m = 1/((m+1)/3) + 1/(m(m+1)/3), scaled by n/m.
    """
    if n < 2:
        raise PreconditionError(f"n must be >= 2, got {n}")
    if n % 3 == 0:
        k = n // 3
        return Decomposition(n, k + 1, k * (k + 1), numerator=3)
    m = _smallest_divisor_2_mod_3(n)
    if m is None:
        return None
    s = n // m
    h = (m + 1) // 3
    return Decomposition(n, h * s, h * n, numerator=3)


def _smallest_divisor_2_mod_3(n: int) -> Optional[int]:
    # Such a divisor exists iff some prime factor is 2 mod 3 (only 2 and
    # primes = 2 mod 3 qualify; a product of primes = 1 mod 3 stays 1 mod 3).
    best = None
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    for d in divs:
        if d % 3 == 2 and (best is None or d < best):
            best = d
    return best


def two_term_for_4_3mod4(q: int) -> Decomposition:
    if q < 0:
        raise PreconditionError(f"q must be >= 0, got {q}")
    n = 4 * q + 3
    return Decomposition(n, q + 1, (q + 1) * n)


def split_unit_fraction(a: int, b: int, c: int) -> tuple[int, int]:
    """Denominators d1, d2 with 1/(abc) = 1/d1 + 1/d2."""
    if min(a, b, c) < 1:
        raise PreconditionError("a, b, c must be positive")
    return a * (a + b) * c, b * (a + b) * c


def type1_from_abc(a: int, b: int, c: int) -> Decomposition:
    """The three-term identity for n = abc - a - b when bc = 1 (mod 4)."""
    if min(a, b, c) < 1:
        raise PreconditionError("a, b, c must be positive")
    if (b * c) % 4 != 1:
        raise PreconditionError(f"need bc = 1 (mod 4), got bc = {b * c}")
    n = a * b * c - a - b
    if n < 2:
        raise ValueError(f"n = abc - a - b = {n} is below 2")
    h = (b * c - 1) // 4
    return Decomposition(n, a * h, a * (a * c - 1) * h, (a * c - 1) * h * n)


def p_poly(alpha: int, beta: int, gamma: int) -> int:
    b = 4 * beta + 3
    return (alpha + 1) * b * (4 * gamma + 3) - (alpha + 1) - b


def q_poly(alpha: int, beta: int, gamma: int) -> int:
    return ((4 * beta + 3) * gamma + 3 * beta + 2) * (alpha + 1) - (beta + 2)


class Family(str, enum.Enum):
    LEMMA1_EQ21 = "Lemma1-Eq21"  # (4abc-1)d = (a+b)n
    LEMMA1_EQ22 = "Lemma1-Eq22"  # (4abc-1)d = an + b
    EQ_TIPO_TRES = "Eq-TipoTres"  # delta*n = (4 a b g delta - 1) - 4 a^2 g
    EQ_TIPO_DOS = "Eq-TipoDos"  # n = (4 a b g - 1) delta - 4 b^2 g
    EQ_TIPO_I = "Eq-TipoI"  # n = abc - a - b, bc = 1 (mod 4)
    POL_P = "Pol-P"  # n = p(alpha, beta, gamma)
    LEMMA4_SYSTEM = "Lemma4-System"  # (xn+t)/lam and (n+lam)/(4xt) integral


_ARITY = {
    Family.LEMMA1_EQ21: 4,
    Family.LEMMA1_EQ22: 4,
    Family.EQ_TIPO_TRES: 4,
    Family.EQ_TIPO_DOS: 4,
    Family.EQ_TIPO_I: 3,
    Family.POL_P: 3,
    Family.LEMMA4_SYSTEM: 3,
}


@dataclass(frozen=True)
class ParamWitness:
    family: Family
    params: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "params", tuple(int(p) for p in self.params))
        if len(self.params) != _ARITY[self.family]:
            raise ValueError(
                f"{self.family.value} takes {_ARITY[self.family]} params, "
                f"got {len(self.params)}"
            )

    def to_json(self) -> dict:
        return {"family": self.family.value, "params": [str(p) for p in self.params]}

    @classmethod
    def from_json(cls, obj: dict) -> "ParamWitness":
        return cls(Family(obj["family"]), tuple(int(p) for p in obj["params"]))


def _eq21(n: int, a: int, b: int, c: int, d: int) -> Optional[Decomposition]:
    if min(a, b, c, d) < 1 or (4 * a * b * c - 1) * d != (a + b) * n:
        return None
    return Decomposition(n, a * b * c * n, b * c * d, a * c * d)


def _eq22(n: int, a: int, b: int, c: int, d: int) -> Optional[Decomposition]:
    if min(a, b, c, d) < 1 or (4 * a * b * c - 1) * d != a * n + b:
        return None
    return Decomposition(n, a * b * c * n, b * c * d, a * c * d * n)


def system_holds(n: int, x: int, t: int, lam: int) -> bool:
    if min(x, t, lam) < 1:
        return False
    return (x * n + t) % lam == 0 and (n + lam) % (4 * x * t) == 0 and n + lam > 0


def check_witness(n: int, w: ParamWitness) -> Optional[Decomposition]:
    """The decomposition a witness induces for n, or None if it does not apply."""
    p = w.params
    if n < 2:
        return None
    if w.family is Family.LEMMA1_EQ21:
        return _eq21(n, *p)
    if w.family is Family.LEMMA1_EQ22:
        return _eq22(n, *p)
    if w.family is Family.EQ_TIPO_TRES:
        alpha, beta, gamma, delta = p
        if min(p) < 1 or delta * n != (4 * alpha * beta * gamma * delta - 1) - 4 * alpha**2 * gamma:
            return None
        # back to (4abc-1)d = (a+b)n with a=alpha, d=beta, c=gamma, b=d*delta-a
        return _eq21(n, alpha, beta * delta - alpha, gamma, beta)
    if w.family is Family.EQ_TIPO_DOS:
        alpha, beta, gamma, delta = p
        if min(p) < 1 or n != (4 * alpha * beta * gamma - 1) * delta - 4 * beta**2 * gamma:
            return None
        # back to (4abc-1)d = an + b with d = a*delta - b
        return _eq22(n, alpha, beta, gamma, alpha * delta - beta)
    if w.family is Family.EQ_TIPO_I:
        a, b, c = p
        if min(p) < 1 or (b * c) % 4 != 1 or a * b * c - a - b != n:
            return None
        return type1_from_abc(a, b, c)
    if w.family is Family.POL_P:
        if min(p) < 0 or p_poly(*p) != n:
            return None
        alpha, beta, gamma = p
        return type1_from_abc(alpha + 1, 4 * beta + 3, 4 * gamma + 3)
    if w.family is Family.LEMMA4_SYSTEM:
        x, t, lam = p
        if not system_holds(n, x, t, lam):
            return None
        return _eq21(n, x, (x * n + t) // lam, (n + lam) // (4 * x * t), t)
    raise ValueError(f"unknown family {w.family!r}")


def shift_witness(n: int, x: int, t: int, lam: int, j: int) -> int:
    """n + 4*x*t*lam*j, which satisfies the same (x, t, lam) system as n."""
    if not system_holds(n, x, t, lam):
        raise PreconditionError(f"(x, t, lam) = ({x}, {t}, {lam}) does not fit n = {n}")
    if j < 0:
        raise PreconditionError(f"j must be >= 0, got {j}")
    return n + 4 * x * t * lam * j
