"""Certify every n in a range, in blocks, with a resumable checkpoint.

Blocks are certified by worker processes and written back in order by a
single writer, which flushes the certificate file before it moves the
checkpoint forward. A checkpoint therefore never claims more than what is
on disk, and resuming drops any certificate lines past ``verified_through``.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
import time
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .arith import small_primes
from .certificates import Decomposer, NotFound
from .sieve import PRIMORIAL_19

__all__ = [
    "VerifyConfig",
    "Checkpoint",
    "CheckpointMismatch",
    "VerifyReport",
    "config_hash",
    "smallest_prime_factors",
    "certify_block",
    "verify_range",
]


class CheckpointMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class VerifyConfig:
    greedy_cap: int = 64
    sieve_divisor: int = PRIMORIAL_19
    param_bound: int = 60
    block: int = 100_000


def config_hash(frm: int, to: int, cfg: VerifyConfig) -> str:
    # the shard count is deliberately left out: it does not change the output
    payload = {"from": str(frm), "to": str(to), "greedy_cap": cfg.greedy_cap,
               "sieve_divisor": str(cfg.sieve_divisor), "param_bound": cfg.param_bound,
               "block": cfg.block, "format": 1}
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class Checkpoint:
    verified_through: int
    open_items: list[int]
    config_hash: str

    def save(self, path: str) -> None:
        obj = {"verified_through": str(self.verified_through),
               "open_items": [str(v) for v in sorted(self.open_items)],
               "config_hash": self.config_hash}
        d = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".ckpt-")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(obj, fh)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str) -> "Checkpoint":
        with open(path) as fh:
            obj = json.load(fh)
        return cls(int(obj["verified_through"]), [int(v) for v in obj["open_items"]], obj["config_hash"])


@dataclass
class VerifyReport:
    frm: int
    to: int
    counts: dict[str, int] = field(default_factory=dict)
    not_found: list[int] = field(default_factory=list)
    resumed_from: Optional[int] = None
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.not_found

    def to_json(self) -> str:
        obj = asdict(self)
        obj["not_found"] = [str(v) for v in self.not_found]
        return json.dumps(obj, sort_keys=True)


def smallest_prime_factors(lo: int, hi: int) -> np.ndarray:
    """spf[i] for n = lo + i over [lo, hi]; 0 marks a prime (or n < 2)."""
    spf = np.zeros(hi - lo + 1, dtype=np.int64)
    for p in small_primes(math.isqrt(hi)):
        start = max(p * p, -(-lo // p) * p)
        if start > hi:
            continue
        seg = spf[start - lo :: p]
        seg[seg == 0] = p
        spf[start - lo :: p] = seg
    return spf


_WORKER: dict = {}


def _decomposer(cfg: VerifyConfig) -> Decomposer:
    d = _WORKER.get(cfg)
    if d is None:
        d = _WORKER[cfg] = Decomposer(cfg.greedy_cap, cfg.sieve_divisor, cfg.param_bound)
    return d


def certify_block(lo: int, hi: int, cfg: VerifyConfig) -> tuple[list[str], Counter, list[int]]:
    """Certificate lines, method counts and NOT-FOUND items for [lo, hi]."""
    dec = _decomposer(cfg)
    spf = smallest_prime_factors(lo, hi).tolist()
    lines: list[str] = []
    counts: Counter = Counter()
    missing: list[int] = []
    for i, n in enumerate(range(lo, hi + 1)):
        try:
            cert = dec.decompose(n, spf[i] or n)
        except NotFound:
            missing.append(n)
            continue
        counts[cert.method.value] += 1
        lines.append(cert.to_line())
    return lines, counts, missing


def _truncate_after(path: str, verified_through: int) -> None:
    # lines are in increasing n; scan back from the end for the cut point
    with open(path, "rb+") as fh:
        fh.seek(0, os.SEEK_END)
        end = fh.tell()
        pos, tail = end, b""
        while pos > 0:
            step = min(1 << 20, pos)
            pos -= step
            fh.seek(pos)
            tail = fh.read(step) + tail
            lines = tail.split(b"\n")
            # lines[0] may be partial unless we are at the file start
            for k in range(len(lines) - 1, 0 if pos else -1, -1):
                line = lines[k]
                if not line.strip():
                    continue
                try:
                    n = int(json.loads(line)["n"])
                except (ValueError, KeyError):
                    continue
                if n <= verified_through:
                    cut = pos + sum(len(x) + 1 for x in lines[: k + 1])
                    fh.truncate(min(cut, end))
                    return
        fh.truncate(0)


def verify_range(
    frm: int,
    to: int,
    shards: int = 1,
    checkpoint_path: Optional[str] = None,
    out_path: Optional[str] = None,
    cfg: VerifyConfig = VerifyConfig(),
    progress: Optional[Callable[[int], None]] = None,
) -> VerifyReport:
    if not 2 <= frm <= to:
        raise ValueError("need 2 <= from <= to")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    t0 = time.monotonic()
    h = config_hash(frm, to, cfg)
    report = VerifyReport(frm, to)
    start = frm
    open_items: list[int] = []
    if checkpoint_path and os.path.exists(checkpoint_path):
        ck = Checkpoint.load(checkpoint_path)
        if ck.config_hash != h:
            raise CheckpointMismatch(
                f"checkpoint {checkpoint_path} was written for a different range or "
                f"configuration (hash {ck.config_hash}, expected {h}); remove it or "
                "rerun with the original arguments"
            )
        start = ck.verified_through + 1
        open_items = list(ck.open_items)
        report.resumed_from = start
        if out_path and os.path.exists(out_path):
            _truncate_after(out_path, ck.verified_through)
    elif out_path:
        open(out_path, "w").close()

    blocks = [(lo, min(lo + cfg.block - 1, to)) for lo in range(start, to + 1, cfg.block)]
    counts: Counter = Counter()
    out = open(out_path, "a", encoding="utf-8") if out_path else None
    pool = ProcessPoolExecutor(max_workers=shards) if shards > 1 else None
    try:
        if pool is None:
            results = (certify_block(lo, hi, cfg) for lo, hi in blocks)
        else:
            results = _ordered(pool, blocks, cfg, window=2 * shards)
        for (lo, hi), (lines, c, missing) in zip(blocks, results):
            if out is not None:
                if lines:
                    out.write("\n".join(lines) + "\n")
                out.flush()
                os.fsync(out.fileno())
            counts.update(c)
            open_items.extend(missing)
            if checkpoint_path:
                Checkpoint(hi, sorted(open_items), h).save(checkpoint_path)
            if progress:
                progress(hi)
    finally:
        if out is not None:
            out.close()
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    report.counts = dict(sorted(counts.items()))
    report.not_found = sorted(open_items)
    report.elapsed = time.monotonic() - t0
    return report


def _ordered(pool, blocks, cfg, window):
    pending: deque = deque()
    it = iter(blocks)
    for lo, hi in it:
        pending.append(pool.submit(certify_block, lo, hi, cfg))
        if len(pending) >= window:
            break
    while pending:
        fut = pending.popleft()
        nxt = next(it, None)
        if nxt is not None:
            pending.append(pool.submit(certify_block, nxt[0], nxt[1], cfg))
        yield fut.result()
