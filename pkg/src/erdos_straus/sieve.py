"""Residue classes of q covered by the q-polynomial, and the sieve over them.

Every generating form writes q(x, y, z) = 4xyz + 3xy + 3xz + 2x + 4yz + 2y + 3z
as ``modulus(a, b) * w + raw(a, b)`` for two fixed integers a <= b and a free
integer w. Fixing (a, b) gives the class q = residue (mod modulus), and each
member maps back to an explicit (x, y, z), so a class is only ever emitted
together with the means to rebuild its witnesses.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from . import kernels
from .arith import small_primes
from .identities import p_poly, q_poly

__all__ = [
    "Form",
    "FORMS",
    "CoverClass",
    "SieveConfig",
    "ClassNotApplicable",
    "PRIMORIAL_19",
    "PRIMORIAL_23",
    "generate_classes",
    "subsume_add",
    "class_witness",
    "sieve_survivors",
    "translation_classes",
    "translation_witness",
    "write_classes",
    "read_classes",
]

PRIMORIAL_19 = 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19
PRIMORIAL_23 = PRIMORIAL_19 * 23


class ClassNotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class Form:
    name: str
    modulus: Callable[[int, int], int]
    raw: Callable[[int, int], int]
    # (a, b, w) -> (x, y, z)
    unpack: Callable[[int, int, int], tuple[int, int, int]]
    # smallest w for which the free variable is >= 0
    w0: Callable[[int, int], int]


def _zero(a, b):
    return 0


def _b(a, b):
    return b


FORMS: dict[str, Form] = {
    f.name: f
    for f in (
        # free x
        Form("x:yz", lambda a, b: 4*a*b + 3*a + 3*b + 2, lambda a, b: 4*a*b + 2*a + 3*b,
             lambda a, b, w: (w, a, b), _zero),
        Form("x:zy", lambda a, b: 4*a*b + 3*a + 3*b + 2, lambda a, b: 4*a*b + 3*a + 2*b,
             lambda a, b, w: (w, b, a), _zero),
        # free y
        Form("y:xz", lambda a, b: 4*a*b + 3*a + 4*b + 2, lambda a, b: 3*a*b + 2*a + 3*b,
             lambda a, b, w: (a, w, b), _zero),
        Form("y:zx", lambda a, b: 4*a*b + 4*a + 3*b + 2, lambda a, b: 3*a*b + 3*a + 2*b,
             lambda a, b, w: (b, w, a), _zero),
        # free z
        Form("z:xy", lambda a, b: 4*a*b + 3*a + 4*b + 3, lambda a, b: 3*a*b + 2*a + 2*b,
             lambda a, b, w: (a, b, w), _zero),
        Form("z:yx", lambda a, b: 4*a*b + 4*a + 3*b + 3, lambda a, b: 3*a*b + 2*a + 2*b,
             lambda a, b, w: (b, a, w), _zero),
        # x = w - t, z = t - y   with y = a, t = b
        Form("x=w-t,z=t-y",
             lambda a, b: 4*a*b - 4*a*a + 3*b + 2,
             lambda a, b: 4*a*a*b - 4*a*a - 4*b*b*a + 4*a*b - a - 3*b*b + b,
             lambda a, b, w: (w - b, a, b - a), _b),
        # x = w - t, y = t - z   with z = a, t = b
        Form("x=w-t,y=t-z",
             lambda a, b: 4*a*b - 4*a*a + 3*b + 2,
             lambda a, b: 4*a*a*b - 4*a*a - 4*b*b*a + 4*a*b + a - 3*b*b,
             lambda a, b, w: (w - b, b - a, a), _b),
        # y = w - t, z = t - x   with x = a, t = b
        Form("y=w-t,z=t-x",
             lambda a, b: 4*a*b - 4*a*a + 4*b + 2 - a,
             lambda a, b: 4*a*a*b - 3*a*a - 4*b*b*a + 4*a*b - a - 4*b*b + b,
             lambda a, b, w: (a, w - b, b - a), _b),
        # z = w - t, x = t - y   with y = a, t = b
        Form("z=w-t,x=t-y",
             lambda a, b: 4*a*b - 4*a*a + a + 3*b + 3,
             lambda a, b: 4*a*a*b - 3*a*a - 4*b*b*a + 2*a*b - 3*b*b - b,
             lambda a, b, w: (b - a, a, w - b), _b),
        # y = w - t, x = t - z   with z = a, t = b
        Form("y=w-t,x=t-z",
             lambda a, b: 4*a*b - 4*a*a + a + 3*b + 2,
             lambda a, b: 4*a*a*b - 3*a*a - 4*b*b*a + 2*a*b - 3*b*b + a,
             lambda a, b, w: (b - a, w - b, a), _b),
        # z = w - t, y = t - x   with x = a, t = b
        Form("z=w-t,y=t-x",
             lambda a, b: 4*a*b - 4*a*a - a + 4*b + 3,
             lambda a, b: 4*a*a*b - 3*a*a - 4*b*b*a + 4*a*b - 4*b*b - b,
             lambda a, b, w: (a, b - a, w - b), _b),
        # y = z + c with c = -u + 2d + 1, (d, u) = (a, b)
        Form("u,d:13",
             lambda a, b: -4*a*a + 4*a*b - 4*a + 3*b - 1,
             lambda a, b: -4*a*a + 4*a*b - 5*a + 3*b - 3,
             lambda a, b, w: (w, a, b - a - 1), _zero),
        # y = z + c with c = u - 2d - 1, (d, u) = (a, b)
        Form("u,d:14",
             lambda a, b: -4*a*a + 4*a*b - 4*a + 3*b - 1,
             lambda a, b: -4*a*a + 4*a*b - 3*a + 2*b - 2,
             lambda a, b, w: (w, b - a - 1, a), _zero),
    )
}


@dataclass(frozen=True)
class CoverClass:
    """q = residue (mod modulus), every member carrying a q-polynomial witness.

    ``residue`` is the least member, so membership means ``q >= residue`` and
    ``q = residue (mod modulus)``; the two coincide for q >= 0.
    """

    modulus: int
    residue: int
    witness_family: str
    fixed_params: tuple[int, int]

    def contains(self, q: int) -> bool:
        return q >= self.residue and (q - self.residue) % self.modulus == 0

    def to_tsv(self) -> str:
        a, b = self.fixed_params
        return f"{self.modulus}\t{self.residue}\t{self.witness_family}\t{a}\t{b}"

    @classmethod
    def from_tsv(cls, line: str) -> "CoverClass":
        m, r, fam, a, b = line.rstrip("\n").split("\t")
        return cls(int(m), int(r), fam, (int(a), int(b)))


def _form_class(form: Form, a: int, b: int) -> Optional[CoverClass]:
    m = form.modulus(a, b)
    if m <= 0:
        return None
    w0 = form.w0(a, b)
    if min(form.unpack(a, b, w0)) < 0:
        return None
    residue = form.raw(a, b) + m * w0
    if not 0 <= residue < m:
        # cannot happen for the forms above; guards the soundness argument
        raise AssertionError(f"form {form.name} at {(a, b)} has least member {residue} >= {m}")
    return CoverClass(m, residue, form.name, (a, b))


def subsume_add(classes: list[CoverClass], c: CoverClass) -> list[CoverClass]:
    """Append ``c`` unless some class already in the list covers all of it."""
    for k in classes:
        if c.modulus % k.modulus == 0 and (c.residue - k.residue) % k.modulus == 0:
            return classes
    classes.append(c)
    return classes


def _candidates(modulus_divisor: int, param_bound: int) -> list[tuple[int, int, int, str]]:
    # Vectorised prefilter: the modulus polynomials are cheap in int64, and only
    # (a, b) with modulus | modulus_divisor survive to the exact Python path.
    a_arr, b_arr = (v.astype(np.int64) for v in np.triu_indices(param_bound + 1))
    out = []
    for idx, form in enumerate(FORMS.values()):
        m = form.modulus(a_arr, b_arr)
        ok = m > 0
        ok[ok] = modulus_divisor % m[ok] == 0
        for a, b in zip(a_arr[ok].tolist(), b_arr[ok].tolist()):
            out.append((b, a, idx, form.name))
    out.sort()
    return out


def generate_classes(cfg: "SieveConfig") -> list[CoverClass]:
    """Cover classes whose modulus divides ``cfg.modulus_divisor``, deduplicated."""
    if cfg.param_bound < 1:
        raise ValueError("param_bound must be >= 1")
    if cfg.modulus_divisor >= 1 << 62:
        raise ValueError("modulus_divisor must fit comfortably in int64")
    classes: list[CoverClass] = []
    for b, a, _, name in _candidates(cfg.modulus_divisor, cfg.param_bound):
        c = _form_class(FORMS[name], a, b)
        if c is not None:
            subsume_add(classes, c)
    return classes


def class_witness(c: CoverClass, q: int) -> tuple[int, int, int]:
    """(alpha, beta, gamma) with q_poly(alpha, beta, gamma) = q for a member q of c."""
    if not c.contains(q):
        raise ClassNotApplicable(f"q = {q} is not in class {c.residue} (mod {c.modulus})")
    form = FORMS[c.witness_family]
    a, b = c.fixed_params
    w, rem = divmod(q - form.raw(a, b), form.modulus(a, b))
    if rem:
        raise ClassNotApplicable(f"class {c} does not match its own form")
    xyz = form.unpack(a, b, w)
    if min(xyz) < 0:
        raise ClassNotApplicable(f"free parameter is negative for q = {q}")
    return xyz


@dataclass
class SieveConfig:
    """Class tables plus the extra filters applied by :func:`sieve_survivors`.

    ``small_primes`` drops q whose 4q+5 is a proper multiple of one of them;
    ``exact_fallback`` finally drops q that have any q-polynomial witness.
    """

    modulus_divisor: int = PRIMORIAL_19
    param_bound: int = 60
    stages: list[list[CoverClass]] = field(default_factory=list)
    small_primes: tuple[int, ...] = ()
    exact_fallback: bool = False

    @classmethod
    def staged(
        cls,
        divisors: Sequence[int] = (PRIMORIAL_19, PRIMORIAL_23),
        param_bound: int = 60,
        prime_bound: int = 23,
        exact_fallback: bool = True,
    ) -> "SieveConfig":
        """One class table per divisor, later tables holding only new classes."""
        stages: list[list[CoverClass]] = []
        seen: list[CoverClass] = []
        for t in divisors:
            fresh = []
            for c in generate_classes(cls(t, param_bound)):
                before = len(seen)
                subsume_add(seen, c)
                if len(seen) > before:
                    fresh.append(c)
            stages.append(fresh)
        return cls(
            modulus_divisor=math.lcm(*divisors),
            param_bound=param_bound,
            stages=stages,
            small_primes=tuple(small_primes(prime_bound)),
            exact_fallback=exact_fallback,
        )

    def all_classes(self) -> list[CoverClass]:
        return [c for stage in self.stages for c in stage]


def sieve_survivors(q_from: int, q_to: int, cfg: SieveConfig, block: int = 1 << 20) -> Iterator[int]:
    """Every q in [q_from, q_to] that none of the configured filters settles."""
    if q_from > q_to:
        raise ValueError("q_from must not exceed q_to")
    if q_from < 0:
        raise ValueError("q must be nonnegative")
    table = cfg.all_classes()
    moduli = np.array([c.modulus for c in table], dtype=np.int64)
    residues = np.array([c.residue for c in table], dtype=np.int64)
    lo = q_from
    while lo <= q_to:
        n = min(block, q_to - lo + 1)
        covered = kernels.cover_mask(lo, n, moduli, residues)
        if cfg.small_primes:
            covered |= kernels.prime_factor_mask(lo, n, cfg.small_primes)
        for i in np.flatnonzero(~covered).tolist():
            q = lo + i
            if cfg.exact_fallback and kernels.qpoly_search(q) is not None:
                continue
            yield q
        lo += n


# -- translation classes over n ----------------------------------------------


def _translations():
    # p(x, y, z) + f * t, translating one variable away from 0
    for y in (0, 1):
        for z in (0, 1):
            yield "translate-x", (y, z), p_poly(0, y, z), (4*y + 3) * (4*z + 3) - 1
    for x in (0, 1):
        for z in (0, 1):
            yield "translate-y", (x, z), p_poly(x, 0, z), 4 * ((x + 1) * (4*z + 3) - 1)
    for x in (0, 1):
        for y in (0, 1):
            yield "translate-z", (x, y), p_poly(x, y, 0), 4 * (x + 1) * (4*y + 3)


def translation_classes() -> list[CoverClass]:
    """Classes of n in N1 swept out by moving one variable of p from 0.

    The two fixed variables range over {0, 1}. Only lines whose starting
    value is prime are kept, and a line is dropped when another line
    contains it.
    """
    from .arith import is_prime

    lines: dict[tuple[int, int], CoverClass] = {}
    for family, fixed, seed, step in _translations():
        if is_prime(seed):
            lines.setdefault((step, seed % step), CoverClass(step, seed % step, family, fixed))

    def inside(c: CoverClass, k: CoverClass) -> bool:
        return c.modulus % k.modulus == 0 and (c.residue - k.residue) % k.modulus == 0

    # keep only lines no other line contains, whatever the generation order
    return [c for c in lines.values() if not any(k is not c and inside(c, k) for k in lines.values())]


def translation_witness(c: CoverClass, n: int) -> tuple[int, int, int]:
    """(alpha, beta, gamma) with p_poly = n for n in a translation class."""
    if not c.contains(n):
        raise ClassNotApplicable(f"n = {n} is not in class {c.residue} (mod {c.modulus})")
    u, v = c.fixed_params
    if c.witness_family == "translate-x":
        seed, args = p_poly(0, u, v), lambda t: (t, u, v)
    elif c.witness_family == "translate-y":
        seed, args = p_poly(u, 0, v), lambda t: (u, t, v)
    elif c.witness_family == "translate-z":
        seed, args = p_poly(u, v, 0), lambda t: (u, v, t)
    else:
        raise ClassNotApplicable(f"unknown translation family {c.witness_family!r}")
    t, rem = divmod(n - seed, c.modulus)
    if rem or t < 0:
        raise ClassNotApplicable(f"n = {n} is below the seed of {c}")
    return args(t)


def write_classes(classes: Iterable[CoverClass], fh: io.TextIOBase) -> None:
    for c in classes:
        fh.write(c.to_tsv() + "\n")


def read_classes(fh: Iterable[str]) -> list[CoverClass]:
    return [CoverClass.from_tsv(line) for line in fh if line.strip()]
