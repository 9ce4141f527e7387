import math

import pytest

from erdos_straus.arith import is_prime
from erdos_straus.greedy import (
    ConvergenceError,
    Stop,
    adversarial_modulus,
    adversarial_n,
    converges_at,
    greedy_decompose,
    step_budget,
    lemma8_class_check,
)
from erdos_straus.identities import PreconditionError, verify_decomposition


def test_n17_trace():
    t = greedy_decompose(17)
    assert [(s.x, s.y) for s in t.steps] == [(5, 29), (6, 15)]
    assert t.stop is Stop.THREE_TERM and t.stop_step == 2
    assert t.decomposition.denominators == (6, 15, 510)


def test_small_cases():
    assert greedy_decompose(7).decomposition.denominators == (2, 14)
    assert greedy_decompose(3).decomposition.denominators == (1, 3)
    assert greedy_decompose(5).decomposition.denominators == (2, 4, 20)
    assert greedy_decompose(2).stop is not Stop.EXHAUSTED


def test_exhausted_is_an_outcome():
    t = greedy_decompose(73, max_steps=1)
    assert t.stop is Stop.EXHAUSTED and t.decomposition is None and t.stop_step is None


def test_preconditions():
    with pytest.raises(PreconditionError):
        greedy_decompose(1)
    with pytest.raises(PreconditionError):
        greedy_decompose(17, numerator=3)
    with pytest.raises(PreconditionError):
        converges_at(0, 1)


def test_every_outcome_verifies():
    for n in range(2, 5000):
        t = greedy_decompose(n, 4, 2000)
        assert t.stop is not Stop.EXHAUSTED, n
        assert verify_decomposition(t.decomposition)


def test_numerator_five():
    for n in range(2, 10**4):
        t = greedy_decompose(n, 5, 500)
        if t.stop is not Stop.EXHAUSTED:
            d = t.decomposition
            assert d.numerator == 5 and verify_decomposition(d)
            if d.z is not None:
                assert 5 * d.x * d.y * d.z == n * (d.x * d.y + d.y * d.z + d.z * d.x)


def test_step_residual_matches_congruence():
    # for n = 4q+1 the leftover numerator is -n x_j mod 4j-1
    for q in range(1, 300):
        n = 4 * q + 1
        for s in greedy_decompose(n, 4, 30).steps:
            assert s.r == (-n * s.x) % (4 * s.j - 1)


def test_converges_at_examples():
    assert converges_at(4, 2) is True
    assert converges_at(4, 1) is False
    assert converges_at(4, 2, "square") is True
    assert converges_at(18, 1) is False
    with pytest.raises(ValueError):
        converges_at(4, 2, "cube")


def test_product_criterion_predicts_first_stop_for_primes():
    for n in range(5, 10**5, 4):
        if not is_prime(n):
            continue
        q = (n - 1) // 4
        t = greedy_decompose(n, 4, 200)
        last = t.stop_step or 200
        for j in range(1, last + 1):
            assert converges_at(q, j) == (j == t.stop_step), (n, j)


def test_criteria_agree_when_coprime():
    # the two criteria can differ only when 4q+1 and 4j-1 share a factor
    for q in range(1, 2001):
        for j in range(1, 51):
            if math.gcd(4 * q + 1, 4 * j - 1) == 1:
                assert converges_at(q, j) == converges_at(q, j, "square"), (q, j)


def test_residual_square_identity():
    for q in range(1, 1001):
        for j in range(1, 21):
            f = 4 * j - 1
            r = (4 * q + 1) * (q + j) % f
            assert (4 * q + 1) ** 2 % f == 4 * r % f


def test_class_check_examples():
    assert lemma8_class_check(1, 3, 3).stop_step == 1
    assert lemma8_class_check(1, 1, 5).decomposition.denominators == (1, 3)
    t = greedy_decompose(2009, 4, 10**4)
    assert t.stop is not Stop.EXHAUSTED
    with pytest.raises(PreconditionError):
        lemma8_class_check(1, 3, 5)


def test_step_budget_counterexample():
    # n = 41 = 1*3*15 - 1 - 3: the budget is 2 steps, greedy needs 8
    assert step_budget(1, 3, 15) == 2
    with pytest.raises(ConvergenceError):
        lemma8_class_check(1, 3, 15)
    assert greedy_decompose(41).stop_step == 8


def test_class_family_converges_eventually():
    for a in range(1, 31):
        for b in range(1, 31):
            for c in range(1, 31):
                n = a * b * c - a - b
                if (b * c) % 4 == 1 and n >= 2:
                    assert greedy_decompose(n, 4, 5000).stop is not Stop.EXHAUSTED, (a, b, c)


def test_adversarial():
    assert adversarial_modulus(1) == 6
    assert adversarial_modulus(2) == 210
    assert adversarial_n(1, 10) == 73
    assert greedy_decompose(73).stop_step > 1
    assert adversarial_n(1, 2) is None
    for j in (2, 3, 4):
        n = adversarial_n(j, 200)
        assert n is not None and is_prime(n)
        assert (n - 1) % (4 * adversarial_modulus(j)) == 0
        assert greedy_decompose(n, 4, 10**5).stop_step > j
