import pytest

from erdos_straus.arith import Congruence
from erdos_straus.identities import Kind, verify_decomposition
from erdos_straus.runs import (
    MalformedCertificate,
    RunCertificate,
    build_run,
    build_type2_run,
    squarefree_split,
    verify_run,
)


def test_build_run_examples():
    r = build_run(2, 0)
    assert r.T == 5 and r.gammas == (1, 0)
    assert r.q_classes == (Congruence(5, 3), Congruence(5, 2))
    r1 = build_run(1, 0)
    assert r1.T == 2 and r1.gammas == (0,)
    r3 = build_run(3, 0)
    assert r3.T % 231 == 173 % 231
    assert all(r3.T % (4 * b + 3) == 3 * b + 2 for b in r3.betas)


@pytest.mark.parametrize("length,start", [(1, 0), (2, 0), (4, 3), (8, 0), (6, 10), (12, 0)])
def test_runs_verify(length, start):
    r = build_run(length, start)
    assert verify_run(r, 20)
    res = [c.residue for c in r.q_classes]
    assert all((res[i] - res[i + 1]) % r.T == 1 for i in range(length - 1))
    assert RunCertificate.from_json(r.to_json()) == r


def test_tampered_run_fails():
    r = build_run(3, 0)
    bad = RunCertificate(r.length, r.betas, r.T + 231, r.gammas, tuple(Congruence.of(r.T + 231, c.residue) for c in r.q_classes))
    assert not verify_run(bad, 5)
    with pytest.raises(MalformedCertificate):
        verify_run(RunCertificate(2, (0,), 5, (1,), (Congruence(5, 3),)), 5)
    with pytest.raises(MalformedCertificate):
        RunCertificate.from_json('{"length": 2}')


def test_squarefree_split():
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(12) == (2, 3)
    assert squarefree_split(72) == (6, 2)
    for a in range(1, 500):
        b, g = squarefree_split(a)
        assert b * b * g == a


def test_type2_examples():
    r = build_type2_run([1])
    assert (r.T, r.delta, r.members) == (3, 3, (5,))
    r = build_type2_run([1, 2])
    assert (r.T, r.delta, r.members) == (21, 1, (17, 13))
    r = build_type2_run([4])
    assert (r.T, r.delta, r.members) == (7, 3, (5,))


def test_type2_windows():
    for start in range(1, 25):
        r = build_type2_run(list(range(start, start + 5)))
        assert [r.members[i] - r.members[i + 1] for i in range(4)] == [4] * 4
        for d in r.decompositions():
            assert verify_decomposition(d) and d.kind is Kind.TYPE_II


def test_type2_domain_error():
    with pytest.raises(ValueError):
        build_type2_run([9])
