"""The stepped greedy search for numerator/n = 1/x + 1/y (+ 1/z).

Step j takes x_j = floor(n / numerator) + j, lets y_j be the least y with
1/y <= numerator/n - 1/x_j, and stops as soon as the leftover fraction is 0
or a unit fraction.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .arith import ceil_div, is_prime, lcm_list
from .identities import Decomposition, PreconditionError

__all__ = [
    "Stop",
    "StepRecord",
    "GreedyTrace",
    "ConvergenceError",
    "greedy_decompose",
    "converges_at",
    "step_budget",
    "lemma8_class_check",
    "adversarial_modulus",
    "adversarial_n",
]


class Stop(str, enum.Enum):
    TWO_TERM = "TwoTerm"
    THREE_TERM = "ThreeTerm"
    EXHAUSTED = "Exhausted"


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class StepRecord:
    j: int
    x: int
    y: int
    # numerator of the leftover numerator/n - 1/x - 1/y = r / (n x y)
    r: int


@dataclass
class GreedyTrace:
    n: int
    numerator: int
    steps: list[StepRecord] = field(default_factory=list)
    stop: Stop = Stop.EXHAUSTED
    decomposition: Optional[Decomposition] = None

    @property
    def stop_step(self) -> Optional[int]:
        if self.stop is Stop.EXHAUSTED:
            return None
        return self.steps[-1].j


def greedy_decompose(n: int, numerator: int = 4, max_steps: int = 64) -> GreedyTrace:
    if n < 2:
        raise PreconditionError(f"n must be >= 2, got {n}")
    if numerator not in (4, 5):
        raise PreconditionError(f"numerator must be 4 or 5, got {numerator}")
    if max_steps < 1:
        raise PreconditionError("max_steps must be >= 1")
    trace = GreedyTrace(n, numerator)
    base = n // numerator
    for j in range(1, max_steps + 1):
        x = base + j
        c = numerator * x - n  # numerator/n - 1/x = c / (n x)
        nx = n * x
        y = ceil_div(nx, c)
        r = c * y - nx
        trace.steps.append(StepRecord(j, x, y, r))
        if r == 0:
            trace.stop = Stop.TWO_TERM
            trace.decomposition = Decomposition(n, x, y, numerator=numerator)
            return trace
        nxy = nx * y
        if nxy % r == 0:
            trace.stop = Stop.THREE_TERM
            trace.decomposition = Decomposition(n, x, y, nxy // r, numerator=numerator)
            return trace
    return trace


def converges_at(q: int, j: int, criterion: str = "product") -> bool:
    """Whether greedy on n = 4q + 1 stops exactly at step j, by a divisibility test.

    With (4q+1)(q+j) = s(4j-1) + r, the ``product`` criterion asks for
    (4j-1-r) | (4q+1)(q+j)(s+1) and the ``square`` criterion for
    (4j-1-r) | ((4q+1)(q+j))^2. r = 0 is a two-term stop and counts as True.
    """
    if q < 1 or j < 1:
        raise PreconditionError("q and j must be >= 1")
    n = 4 * q + 1
    f = 4 * j - 1
    nx = n * (q + j)
    s, r = divmod(nx, f)
    if r == 0:
        return True
    d = f - r
    if criterion == "product":
        return nx * (s + 1) % d == 0
    if criterion == "square":
        return nx * nx % d == 0
    raise ValueError(f"unknown criterion {criterion!r}")


def step_budget(a: int, b: int, c: int) -> int:
    """Step budget a(bc-1)/4 - floor(n/4) + 1 for n = abc - a - b."""
    n = a * b * c - a - b
    return a * (b * c - 1) // 4 - n // 4 + 1


def lemma8_class_check(a: int, b: int, c: int) -> GreedyTrace:
    """Run greedy on n = abc - a - b (bc = 1 mod 4) within the proven step budget."""
    if min(a, b, c) < 1:
        raise PreconditionError("a, b, c must be positive")
    if (b * c) % 4 != 1:
        raise PreconditionError(f"need bc = 1 (mod 4), got bc = {b * c}")
    n = a * b * c - a - b
    if n < 2:
        raise PreconditionError(f"n = {n} is below 2")
    budget = step_budget(a, b, c)
    trace = greedy_decompose(n, 4, max(budget, 1))
    if trace.stop is Stop.EXHAUSTED:
        raise ConvergenceError(f"greedy on n = {n} did not stop within {budget} steps")
    return trace


def adversarial_modulus(j: int) -> int:
    """lcm of 3, 7, ..., 4j-1 and 2, 5, ..., 3j-1."""
    if j < 1:
        raise PreconditionError("j must be >= 1")
    return lcm_list([4 * k - 1 for k in range(1, j + 1)] + [3 * k - 1 for k in range(1, j + 1)])


def adversarial_n(j: int, t_max: int) -> Optional[int]:
    """Least prime n = 4 L t + 1 (t <= t_max) on which greedy passes step j."""
    lm = adversarial_modulus(j)
    for t in range(1, t_max + 1):
        n = 4 * lm * t + 1
        if is_prime(n):
            return n
    return None
