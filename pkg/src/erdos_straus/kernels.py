"""Hot loops behind the q-polynomial enumeration and the residue sieve.

Each kernel has a numba implementation (``*_nb``) and a numpy one
(``*_np``) with identical results; the public wrappers pick one according
to :mod:`erdos_straus._accel`. Inputs are assumed to fit in int64.
"""
from __future__ import annotations

import math

import numpy as np

from . import _accel
from ._accel import njit

__all__ = [
    "qpoly_bitmap",
    "qpoly_search",
    "cover_mask",
    "prime_factor_mask",
    "corollary_violation",
    "IMPLEMENTATIONS",
]

_NO_HIT = (-1, -1, -1)


# -- forward enumeration of q(alpha, beta, gamma) ---------------------------
#
# q + beta + 2 = k * m  with  m = (4 beta + 3) gamma + 3 beta + 2,  k = alpha + 1.


@njit
def qpoly_bitmap_nb(limit):
    out = np.zeros(limit + 1, np.bool_)
    beta = 0
    while 2 * beta <= limit:
        step = 4 * beta + 3
        off = beta + 2
        top = limit + off
        m = 3 * beta + 2
        while m <= top:
            v = m - off
            while v <= limit:
                out[v] = True
                v += m
            m += step
        beta += 1
    return out


def qpoly_bitmap_np(limit, chunk=1 << 22):
    out = np.zeros(limit + 1, dtype=bool)
    betas = np.arange(0, limit // 2 + 1, dtype=np.int64)
    step = 4 * betas + 3
    off = betas + 2
    top = limit + off
    ngamma = (top - (3 * betas + 2)) // step + 1
    # all (beta, gamma) pairs with m <= top
    pb = np.repeat(betas, ngamma)
    starts = np.cumsum(ngamma) - ngamma
    pg = np.arange(pb.size, dtype=np.int64) - np.repeat(starts, ngamma)
    m = (4 * pb + 3) * pg + 3 * pb + 2
    poff = pb + 2
    count = (limit + poff) // m
    del pb, pg, starts

    # short progressions are expanded in bulk, long ones are strided writes
    long_ = count > 64
    for mi, oi in zip(m[long_].tolist(), poff[long_].tolist()):
        out[mi - oi :: mi] = True
    m, poff, count = m[~long_], poff[~long_], count[~long_]
    ends = np.cumsum(count)
    lo = 0
    while lo < m.size:
        hi = int(np.searchsorted(ends, (ends[lo - 1] if lo else 0) + chunk, side="right"))
        hi = max(hi, lo + 1)
        c = count[lo:hi]
        mm = np.repeat(m[lo:hi], c)
        oo = np.repeat(poff[lo:hi], c)
        s = np.cumsum(c) - c
        k = np.arange(mm.size, dtype=np.int64) - np.repeat(s, c) + 1
        out[k * mm - oo] = True
        lo = hi
    return out


@njit
def _isqrt_nb(n):
    r = np.int64(math.sqrt(n))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@njit
def qpoly_search_nb(q):
    # canonical witness: least beta, then least k = alpha + 1
    if q < 0:
        return -1, -1, -1
    beta = 0
    while 2 * beta <= q:
        step = 4 * beta + 3
        r = 3 * beta + 2
        big_n = q + beta + 2
        kmax = big_n // r
        s = _isqrt_nb(big_n)
        if kmax <= s:
            for k in range(1, kmax + 1):
                if big_n % k == 0:
                    m = big_n // k
                    if (m - r) % step == 0:
                        return k - 1, beta, (m - r) // step
        else:
            for d in range(1, s + 1):
                if big_n % d == 0:
                    m = big_n // d
                    if m >= r and (m - r) % step == 0:
                        return d - 1, beta, (m - r) // step
            for d in range(s, 0, -1):
                if big_n % d == 0 and d >= r and (d - r) % step == 0:
                    return big_n // d - 1, beta, (d - r) // step
        beta += 1
    return -1, -1, -1


def qpoly_search_np(q):
    if q < 0:
        return _NO_HIT
    bmax = q // 2
    b = 0
    # small beta: vectorised trial division of N = q + beta + 2
    while b <= bmax:
        big_n = q + b + 2
        r = 3 * b + 2
        step = 4 * b + 3
        s = math.isqrt(big_n)
        if big_n // r <= s:
            break
        d = np.arange(1, s + 1, dtype=np.int64)
        hit = d[big_n % d == 0]
        cand = np.concatenate([big_n // hit, hit[::-1]])
        ok = cand[(cand >= r) & ((cand - r) % step == 0)]
        if ok.size:
            m = int(ok[0])
            return big_n // m - 1, b, (m - r) // step
        b += 1
    if b > bmax:
        return _NO_HIT
    # large beta: k = alpha + 1 is small, vectorise over beta for each k
    betas = np.arange(b, bmax + 1, dtype=np.int64)
    big_n = q + betas + 2
    r = 3 * betas + 2
    step = 4 * betas + 3
    kmax = big_n // r  # non-increasing in beta
    best = betas.size
    best_k = -1
    for k in range(1, int(kmax[0]) + 1):
        cnt = int(np.searchsorted(-kmax, -k, side="right"))
        cnt = min(cnt, best)
        if cnt == 0:
            break
        nk = big_n[:cnt]
        mk = nk // k
        ok = (nk % k == 0) & ((mk - r[:cnt]) % step[:cnt] == 0)
        idx = np.flatnonzero(ok)
        if idx.size and idx[0] < best:
            best, best_k = int(idx[0]), k
    if best_k < 0:
        return _NO_HIT
    beta = int(betas[best])
    m = (q + beta + 2) // best_k
    return best_k - 1, beta, (m - 3 * beta - 2) // (4 * beta + 3)


# -- residue-class sieve ------------------------------------------------------


@njit
def cover_mask_nb(q_from, length, moduli, residues):
    out = np.zeros(length, np.bool_)
    for i in range(moduli.size):
        m = moduli[i]
        v = (residues[i] - q_from) % m
        while v < length:
            out[v] = True
            v += m
    return out


def cover_mask_np(q_from, length, moduli, residues):
    out = np.zeros(length, dtype=bool)
    starts = (np.asarray(residues, dtype=np.int64) - q_from) % np.asarray(moduli, dtype=np.int64)
    for m, v in zip(np.asarray(moduli).tolist(), starts.tolist()):
        out[v::m] = True
    return out


def _prime_factor_roots(q_from, primes):
    # q with p | 4q + 5:  q = -5 * 4^{-1} (mod p), for odd p
    primes = [int(p) for p in primes if int(p) % 2 == 1]
    roots = [(-5 * pow(4, -1, p)) % p for p in primes]
    return (
        np.asarray(primes, dtype=np.int64),
        np.asarray([(r - q_from) % p for r, p in zip(roots, primes)], dtype=np.int64),
    )


@njit
def _prime_factor_mask_nb(q_from, length, primes, starts):
    out = np.zeros(length, np.bool_)
    for i in range(primes.size):
        p = primes[i]
        v = starts[i]
        while v < length:
            out[v] = True
            v += p
        # 4q + 5 == p is prime, not composite
        if (p - 5) % 4 == 0:
            e = (p - 5) // 4 - q_from
            if 0 <= e < length:
                out[e] = False
    return out


def prime_factor_mask_nb(q_from, length, primes):
    p, s = _prime_factor_roots(q_from, primes)
    return _prime_factor_mask_nb(q_from, length, p, s)


def prime_factor_mask_np(q_from, length, primes):
    p, s = _prime_factor_roots(q_from, primes)
    out = np.zeros(length, dtype=bool)
    for pi, si in zip(p.tolist(), s.tolist()):
        out[si::pi] = True
    for pi in p.tolist():
        if (pi - 5) % 4 == 0 and 0 <= (pi - 5) // 4 - q_from < length:
            out[(pi - 5) // 4 - q_from] = False
    return out


# -- divisors of n^2 + n + beta + 1 ------------------------------------------


@njit
def corollary_violation_nb(n_max, beta_max):
    for beta in range(beta_max + 1):
        step = 4 * beta + 3
        r = 3 * beta + 2
        for n in range(n_max + 1):
            big_n = n * n + n + beta + 1
            d = 1
            while d * d <= big_n:
                if big_n % d == 0:
                    if d % step == r:
                        return n, beta, d
                    if (big_n // d) % step == r:
                        return n, beta, big_n // d
                d += 1
    return -1, -1, -1


def corollary_violation_np(n_max, beta_max):
    ns = np.arange(n_max + 1, dtype=np.int64)
    for beta in range(beta_max + 1):
        step = 4 * beta + 3
        r = 3 * beta + 2
        big_n = ns * ns + ns + beta + 1
        for d in range(1, math.isqrt(int(big_n[-1])) + 1):
            ok = (big_n % d == 0) & (d * d <= big_n)
            bad = ok & ((d % step == r) | ((big_n // d) % step == r))
            if bad.any():
                i = int(np.flatnonzero(bad)[0])
                other = int(big_n[i]) // d
                return i, beta, d if d % step == r else other
    return _NO_HIT


IMPLEMENTATIONS = {
    "numba": {
        "qpoly_bitmap": qpoly_bitmap_nb,
        "qpoly_search": qpoly_search_nb,
        "cover_mask": cover_mask_nb,
        "prime_factor_mask": prime_factor_mask_nb,
        "corollary_violation": corollary_violation_nb,
    },
    "numpy": {
        "qpoly_bitmap": qpoly_bitmap_np,
        "qpoly_search": qpoly_search_np,
        "cover_mask": cover_mask_np,
        "prime_factor_mask": prime_factor_mask_np,
        "corollary_violation": corollary_violation_np,
    },
}


def _impl(name):
    return IMPLEMENTATIONS[_accel.backend_name()][name]


def qpoly_bitmap(limit: int) -> np.ndarray:
    """Boolean array over [0, limit] marking every value of q(alpha, beta, gamma)."""
    return _impl("qpoly_bitmap")(int(limit))


def qpoly_search(q: int):
    """Witness (alpha, beta, gamma) with q(alpha, beta, gamma) = q, or None."""
    hit = _impl("qpoly_search")(int(q))
    if hit[0] < 0:
        return None
    return tuple(int(v) for v in hit)


def cover_mask(q_from: int, length: int, moduli: np.ndarray, residues: np.ndarray) -> np.ndarray:
    moduli = np.ascontiguousarray(moduli, dtype=np.int64)
    residues = np.ascontiguousarray(residues, dtype=np.int64)
    return _impl("cover_mask")(int(q_from), int(length), moduli, residues)


def prime_factor_mask(q_from: int, length: int, primes) -> np.ndarray:
    """Mask of q in [q_from, q_from+length) whose 4q+5 is a proper multiple of a listed prime."""
    return _impl("prime_factor_mask")(int(q_from), int(length), primes)


def corollary_violation(n_max: int, beta_max: int):
    hit = _impl("corollary_violation")(int(n_max), int(beta_max))
    if hit[0] < 0:
        return None
    return tuple(int(v) for v in hit)
