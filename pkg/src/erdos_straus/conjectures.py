"""Membership in the sets A and B of q-values, and the N1 predicate on n.

A = {n^2 + n - 1 : n >= 1}, B = values of q(alpha, beta, gamma) at q >= 1,
and C is what is left of the positive integers. n = 4q + 5 lies in N1 exactly
when q is a value of the q-polynomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .arith import divisors
from .identities import PreconditionError

__all__ = [
    "QPartition",
    "WitnessTag",
    "in_set_A",
    "in_set_B",
    "partition_q",
    "q_conjecture_holds",
    "n1_contains",
    "corollary_divisor_check",
]

_INT64_SAFE = 1 << 61


def in_set_A(q: int) -> Optional[int]:
    """The n >= 1 with q = n^2 + n - 1, i.e. 4q + 5 = (2n + 1)^2, or None."""
    if q < 1:
        return None
    k = math.isqrt(4 * q + 5)
    if k * k != 4 * q + 5:
        return None
    return (k - 1) // 2


def in_set_B(q: int, search_bound: Optional[int] = None) -> Optional[tuple[int, int, int]]:
    """A witness (alpha, beta, gamma) with q_poly = q, or None.

    The search is complete: beta can never exceed q/2. ``search_bound`` only
    refuses inputs larger than the caller is willing to pay for.
    """
    if q < 1:
        return None
    if search_bound is not None and q > search_bound:
        raise ValueError(f"q = {q} exceeds search_bound {search_bound}")
    if q >= _INT64_SAFE:
        raise OverflowError("q is outside the int64 kernel range")
    return kernels.qpoly_search(q)


@dataclass
class QPartition:
    limit: int
    # boolean masks over [0, limit]; index 0 is unused
    a_mask: np.ndarray
    b_mask: np.ndarray
    c_members: list[int]

    def kind(self, q: int) -> str:
        if self.a_mask[q]:
            return "A"
        if self.b_mask[q]:
            return "B"
        return "C"


def partition_q(limit: int) -> QPartition:
    if limit < 1:
        raise PreconditionError("limit must be >= 1")
    b = kernels.qpoly_bitmap(limit)
    b[0] = False
    a = np.zeros(limit + 1, dtype=bool)
    n = np.arange(1, math.isqrt(limit + 1) + 2, dtype=np.int64)
    vals = n * n + n - 1
    a[vals[vals <= limit]] = True
    if (a & b).any():
        raise AssertionError("A and B overlap")
    c = np.flatnonzero(~(a | b))
    return QPartition(limit, a, b, [int(v) for v in c if v >= 1])


@dataclass(frozen=True)
class WitnessTag:
    relation: int  # 1: (4x+3)(4y+3), 2: (4x+5)(4y+5), 3: q-polynomial
    params: tuple[int, ...]


def q_conjecture_holds(q: int) -> Optional[WitnessTag]:
    """Which of the three q-relations holds for q, with its parameters."""
    if q < 1:
        raise PreconditionError("q must be >= 1")
    big = 4 * q + 5
    for d in divisors(big):
        if d * d > big:
            break
        if d % 4 == 3:
            return WitnessTag(1, ((d - 3) // 4, (big // d - 3) // 4))
    for d in divisors(big):
        if d * d > big:
            break
        if d >= 5 and d % 4 == 1:
            return WitnessTag(2, ((d - 5) // 4, (big // d - 5) // 4))
    w = in_set_B(q)
    if w is not None:
        return WitnessTag(3, w)
    return None


def n1_contains(n: int) -> Optional[tuple[int, int, int]]:
    """(alpha, beta, gamma) with p(alpha, beta, gamma) = n, or None."""
    if n < 5 or n % 4 != 1:
        return None
    return kernels.qpoly_search((n - 5) // 4)


def corollary_divisor_check(n_max: int, beta_max: int) -> bool:
    """No divisor of n^2 + n + beta + 1 is 3 beta + 2 mod 4 beta + 3, over the box."""
    if n_max < 0 or beta_max < 0:
        raise PreconditionError("bounds must be >= 0")
    return kernels.corollary_violation(n_max, beta_max) is None
