"""Single-n decomposition with a re-checkable certificate, and the JSONL format.

A certificate line is a JSON object whose integers are decimal strings:
``{"n":..,"method":..,"kind":..,"x":..,"y":..,"z":..,"witness":{..}}`` with
``z`` absent for two-term decompositions and ``witness`` optional.
Re-checking only uses n, x, y, z, so it does not trust whatever produced them.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from . import kernels
from .arith import factorize, is_prime
from .greedy import Stop, greedy_decompose
from .identities import Decomposition, Family, ParamWitness, type1_from_abc, two_term_for_4_3mod4, verify_decomposition
from .sieve import PRIMORIAL_19, CoverClass, SieveConfig, class_witness, generate_classes

__all__ = [
    "Method",
    "Certificate",
    "NotFound",
    "CertificateParseError",
    "Decomposer",
    "decompose",
    "read_certificates",
    "RecheckReport",
    "recheck",
    "recheck_lines",
]


class NotFound(RuntimeError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"NOT-FOUND: no decomposition found for n = {n}")


class CertificateParseError(ValueError):
    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {reason}")


class Method(str, enum.Enum):
    EVEN_REDUCE = "even-reduce"
    TWO_TERM_3MOD4 = "two-term-3mod4"
    COMPOSITE_FACTOR = "composite-factor"
    SIEVE_CLASS = "sieve-class"
    GREEDY = "greedy"
    WITNESS_SEARCH = "witness-search"


@dataclass(frozen=True)
class Certificate:
    n: int
    method: Method
    x: int
    y: int
    z: Optional[int] = None
    witness: Optional[dict] = None
    kind: str = ""

    @classmethod
    def of(cls, method: Method, d: Decomposition, witness: Optional[dict] = None) -> "Certificate":
        return cls(d.n, Method(method), d.x, d.y, d.z, witness, d.kind.value)

    @property
    def decomposition(self) -> Decomposition:
        return Decomposition(self.n, self.x, self.y, self.z)

    def to_obj(self) -> dict:
        obj = {"n": str(self.n), "method": self.method.value, "kind": self.kind,
               "x": str(self.x), "y": str(self.y)}
        if self.z is not None:
            obj["z"] = str(self.z)
        if self.witness is not None:
            obj["witness"] = self.witness
        return obj

    def to_line(self) -> str:
        return json.dumps(self.to_obj(), separators=(",", ":"))

    @classmethod
    def from_obj(cls, obj: dict) -> "Certificate":
        z = obj.get("z")
        return cls(
            int(obj["n"]),
            Method(obj["method"]),
            int(obj["x"]),
            int(obj["y"]),
            None if z is None else int(z),
            obj.get("witness"),
            obj.get("kind", ""),
        )

    @classmethod
    def from_line(cls, line: str) -> "Certificate":
        return cls.from_obj(json.loads(line))


class Decomposer:
    """The method cascade for one n, with cached results for small primes.

    Order: even n, n = 3 (mod 4), composite n (lift the certificate of its
    smallest prime factor), and for a prime n = 1 (mod 4): greedy up to
    ``greedy_cap`` steps, then the sieve class table, then a full search for
    a q-polynomial witness.
    """

    def __init__(self, greedy_cap: int = 64, sieve_divisor: int = PRIMORIAL_19, param_bound: int = 60):
        self.greedy_cap = greedy_cap
        self.classes: list[CoverClass] = generate_classes(SieveConfig(sieve_divisor, param_bound))
        self._mod = np.array([c.modulus for c in self.classes], dtype=np.int64)
        self._res = np.array([c.residue for c in self.classes], dtype=np.int64)
        self._prime_cache: dict[int, Certificate] = {}

    def decompose(self, n: int, spf: Optional[int] = None) -> Certificate:
        """Certificate for n; ``spf`` is the smallest prime factor if already known."""
        if n < 2:
            raise ValueError(f"n must be >= 2, got {n}")
        if n % 2 == 0:
            h = n // 2
            return Certificate.of(Method.EVEN_REDUCE, Decomposition(n, h, n, n))
        if n % 4 == 3:
            return Certificate.of(Method.TWO_TERM_3MOD4, two_term_for_4_3mod4((n - 3) // 4))
        if spf is None:
            spf = n if is_prime(n) else min(factorize(n))
        if spf != n:
            base = self.decompose_prime(spf)
            d = base.decomposition.scaled(n // spf)
            return Certificate.of(Method.COMPOSITE_FACTOR, d, {"factor": str(spf), "base": base.method.value})
        return self.decompose_prime(n)

    def decompose_prime(self, p: int) -> Certificate:
        cached = self._prime_cache.get(p)
        if cached is not None:
            return cached
        if p % 4 == 3:
            cert = Certificate.of(Method.TWO_TERM_3MOD4, two_term_for_4_3mod4((p - 3) // 4))
        elif p == 2:
            cert = Certificate.of(Method.EVEN_REDUCE, Decomposition(2, 1, 2, 2))
        else:
            cert = self._prime_1mod4(p)
        if p < 1 << 20:
            self._prime_cache[p] = cert
        return cert

    def _prime_1mod4(self, p: int) -> Certificate:
        trace = greedy_decompose(p, 4, self.greedy_cap)
        if trace.stop is not Stop.EXHAUSTED:
            return Certificate.of(Method.GREEDY, trace.decomposition, {"step": str(trace.stop_step)})
        q = (p - 5) // 4
        if q >= 0 and self.classes:
            hit = np.flatnonzero((q >= self._res) & ((q - self._res) % self._mod == 0))
            if hit.size:
                c = self.classes[int(hit[0])]
                abg = class_witness(c, q)
                w = ParamWitness(Family.POL_P, abg).to_json()
                w["class"] = [str(c.modulus), str(c.residue), c.witness_family, *map(str, c.fixed_params)]
                return Certificate.of(Method.SIEVE_CLASS, _from_pol(abg), w)
        abg = kernels.qpoly_search(q) if q >= 0 else None
        if abg is not None:
            return Certificate.of(Method.WITNESS_SEARCH, _from_pol(abg), ParamWitness(Family.POL_P, abg).to_json())
        raise NotFound(p)


def _from_pol(abg: tuple[int, int, int]) -> Decomposition:
    a, b, g = abg
    return type1_from_abc(a + 1, 4 * b + 3, 4 * g + 3)


_DEFAULT: Optional[Decomposer] = None


def decompose(n: int) -> Certificate:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Decomposer()
    return _DEFAULT.decompose(n)


def read_certificates(lines: Iterable[str]) -> Iterator[Certificate]:
    for i, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            yield Certificate.from_line(line)
        except (ValueError, KeyError, TypeError) as exc:
            raise CertificateParseError(i, str(exc)) from exc


@dataclass
class RecheckReport:
    total: int = 0
    passed: int = 0
    # (line number, n) of every certificate that fails the identity
    failures: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total


def recheck_lines(lines: Iterable[str]) -> RecheckReport:
    rep = RecheckReport()
    for i, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            n, x, y = int(obj["n"]), int(obj["x"]), int(obj["y"])
            z = obj.get("z")
            z = None if z is None else int(z)
        except (ValueError, KeyError, TypeError) as exc:
            raise CertificateParseError(i, str(exc)) from exc
        rep.total += 1
        if n >= 2 and verify_decomposition(Decomposition(n, x, y, z)):
            rep.passed += 1
        else:
            rep.failures.append((i, n))
    return rep


def recheck(path: str) -> RecheckReport:
    with open(path, encoding="utf-8") as fh:
        return recheck_lines(fh)
