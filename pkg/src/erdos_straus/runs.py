"""Runs of consecutive residue classes whose members all decompose.

For consecutive beta_1, ..., beta_L the congruences T = 3 beta + 2 (mod 4 beta + 3)
are pairwise compatible, so one T serves every beta at once. Then each class
q = -(beta_j + 2) (mod T) is a line of q-polynomial values with fixed beta_j and
gamma_j, and these L classes are consecutive residues mod T.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .arith import Congruence, crt_solve, factorize, lcm_list
from .identities import (
    Decomposition,
    Family,
    ParamWitness,
    check_witness,
    q_poly,
    type1_from_abc,
    verify_decomposition,
)

__all__ = [
    "RunCertificate",
    "MalformedCertificate",
    "Type2Run",
    "build_run",
    "verify_run",
    "build_type2_run",
    "squarefree_split",
]


class MalformedCertificate(ValueError):
    pass


@dataclass(frozen=True)
class RunCertificate:
    length: int
    betas: tuple[int, ...]
    T: int
    gammas: tuple[int, ...]
    q_classes: tuple[Congruence, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "length": self.length,
                "betas": [str(b) for b in self.betas],
                "T": str(self.T),
                "gammas": [str(g) for g in self.gammas],
                "q_classes": [[str(c.modulus), str(c.residue)] for c in self.q_classes],
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "RunCertificate":
        try:
            obj = json.loads(text)
            return cls(
                int(obj["length"]),
                tuple(int(b) for b in obj["betas"]),
                int(obj["T"]),
                tuple(int(g) for g in obj["gammas"]),
                tuple(Congruence(int(m), int(r)) for m, r in obj["q_classes"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedCertificate(str(exc)) from exc


def build_run(length: int, start_beta: int = 0) -> RunCertificate:
    if length < 1:
        raise ValueError("length must be >= 1")
    if start_beta < 0:
        raise ValueError("start_beta must be >= 0")
    betas = tuple(range(start_beta, start_beta + length))
    sol = crt_solve([Congruence(4 * b + 3, 3 * b + 2) for b in betas])
    floor = max(3 * b + 2 for b in betas)
    t = sol.residue
    if t < floor:
        t += sol.modulus * -((t - floor) // sol.modulus)
    gammas = tuple((t - 3 * b - 2) // (4 * b + 3) for b in betas)
    classes = tuple(Congruence.of(t, -(b + 2)) for b in betas)
    return RunCertificate(length, betas, t, gammas, classes)


def _check_shape(cert: RunCertificate) -> None:
    n = cert.length
    if n < 1 or not (len(cert.betas) == len(cert.gammas) == len(cert.q_classes) == n):
        raise MalformedCertificate("field lengths disagree with length")
    if cert.T < 1:
        raise MalformedCertificate("T must be positive")
    for b, g, c in zip(cert.betas, cert.gammas, cert.q_classes):
        if b < 0 or g < 0 or c.modulus != cert.T:
            raise MalformedCertificate(f"bad entry for beta = {b}")


def verify_run(cert: RunCertificate, samples: int = 50, seed: int = 0) -> bool:
    """Re-check the congruences, the class layout and sampled members."""
    _check_shape(cert)
    t = cert.T
    for b, g, c in zip(cert.betas, cert.gammas, cert.q_classes):
        if t != (4 * b + 3) * g + 3 * b + 2:
            return False
        if c.residue != (-(b + 2)) % t:
            return False
    res = [c.residue for c in cert.q_classes]
    if any((res[i] - res[i + 1]) % t != 1 for i in range(len(res) - 1)):
        return False
    rng = random.Random(seed)
    for b, g in zip(cert.betas, cert.gammas):
        base = t - b - 2  # least member, alpha = 0
        ks = [0] + [rng.randrange(0, 1 << 32) for _ in range(max(samples - 1, 0))]
        for k in ks:
            q = base + k * t
            alpha = (q + b + 2) // t - 1
            if q_poly(alpha, b, g) != q:
                return False
            d = type1_from_abc(alpha + 1, 4 * b + 3, 4 * g + 3)
            if d.n != 4 * q + 5 or not verify_decomposition(d):
                return False
    return True


def squarefree_split(a: int) -> tuple[int, int]:
    """(beta, gamma) with a = beta^2 gamma and gamma squarefree."""
    if a < 1:
        raise ValueError("a must be >= 1")
    beta = gamma = 1
    for p, e in factorize(a).items():
        beta *= p ** (e // 2)
        gamma *= p ** (e % 2)
    return beta, gamma


@dataclass(frozen=True)
class Type2Run:
    T: int
    delta: int
    members: tuple[int, ...]
    witnesses: tuple[ParamWitness, ...]

    def decompositions(self) -> list[Decomposition]:
        return [check_witness(n, w) for n, w in zip(self.members, self.witnesses)]


def build_type2_run(a_values: list[int]) -> Type2Run:
    """Members n = T delta - 4a, one per a, each with a Type II witness."""
    if not a_values:
        raise ValueError("a_values must be non-empty")
    split = [squarefree_split(a) for a in a_values]
    t = lcm_list(4 * b * g - 1 for b, g in split)
    delta = 1 if t % 4 == 1 else 3
    members, witnesses = [], []
    for a, (b, g) in zip(a_values, split):
        n = t * delta - 4 * a
        if n < 2:
            raise ValueError(f"member for a = {a} is {n}, below 2")
        w = ParamWitness(Family.EQ_TIPO_DOS, (1, b, g, t * delta // (4 * b * g - 1)))
        if check_witness(n, w) is None:
            raise AssertionError(f"witness {w} does not certify n = {n}")
        members.append(n)
        witnesses.append(w)
    return Type2Run(t, delta, tuple(members), tuple(witnesses))
