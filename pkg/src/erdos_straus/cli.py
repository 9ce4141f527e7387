"""Command-line entry point: ``erdos-straus <command> ...``.

Exit status is 0 on success, 1 when something was not found or a check
failed, and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import _accel
from .arith import jacobi
from .certificates import CertificateParseError, NotFound, decompose, recheck
from .conjectures import partition_q
from .greedy import Stop, greedy_decompose
from .identities import PreconditionError
from .runs import build_run, verify_run
from .sieve import PRIMORIAL_19, SieveConfig, generate_classes, write_classes
from .verify import CheckpointMismatch, VerifyConfig, verify_range

# q-values of C known below 2.1e6; anything else found is reported loudly.
KNOWN_C = (
    25, 115, 145, 199, 659, 731, 739, 925, 1195, 1235, 2381, 3259, 3365, 3709,
    4705, 6325, 8989, 15095, 27991, 39239, 62129, 174641, 279199, 281735,
    310771, 404629, 1308259, 1822105, 2083075,
)

OK, FAIL, USAGE = 0, 1, 2


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_decompose(args) -> int:
    if args.n < 2:
        _err("n must be >= 2")
        return USAGE
    try:
        cert = decompose(args.n)
    except NotFound as exc:
        _err(str(exc))
        return FAIL
    print(cert.to_line())
    return OK


def cmd_verify(args) -> int:
    if not 2 <= args.frm <= args.to:
        _err("need 2 <= --from <= --to")
        return USAGE
    if args.shards < 1:
        _err("--shards must be >= 1")
        return USAGE
    cfg = VerifyConfig(greedy_cap=args.greedy_cap)
    try:
        rep = verify_range(args.frm, args.to, args.shards, args.checkpoint, args.out, cfg)
    except CheckpointMismatch as exc:
        _err(str(exc))
        return FAIL
    print(rep.to_json())
    for n in rep.not_found:
        _err(f"NOT-FOUND {n}")
    return OK if rep.ok else FAIL


def cmd_recheck(args) -> int:
    try:
        rep = recheck(args.path)
    except OSError as exc:
        _err(str(exc))
        return USAGE
    except CertificateParseError as exc:
        _err(f"malformed certificate, {exc}")
        return FAIL
    for line_no, n in rep.failures:
        print(f"FAIL line {line_no} n={n}")
    print(f"checked {rep.total}, passed {rep.passed}, failed {len(rep.failures)}")
    return OK if rep.ok else FAIL


def cmd_greedy(args) -> int:
    try:
        trace = greedy_decompose(args.n, args.numerator, args.max_steps)
    except PreconditionError as exc:
        _err(str(exc))
        return USAGE
    for s in trace.steps[-args.show :] if args.show else trace.steps:
        print(f"step {s.j}\tx={s.x}\ty={s.y}\tr={s.r}")
    d = trace.decomposition
    if trace.stop is Stop.EXHAUSTED:
        print(f"{trace.stop.value} after {len(trace.steps)} steps")
        return FAIL
    print(f"{trace.stop.value} at step {trace.stop_step}: " + " ".join(str(v) for v in d.denominators))
    return OK


def cmd_sieve_classes(args) -> int:
    if args.modulus_divisor < 1 or args.param_bound < 1:
        _err("--modulus-divisor and --param-bound must be >= 1")
        return USAGE
    write_classes(generate_classes(SieveConfig(args.modulus_divisor, args.param_bound)), sys.stdout)
    return OK


def cmd_qstrong(args) -> int:
    if args.limit < 1:
        _err("--limit must be >= 1")
        return USAGE
    part = partition_q(args.limit)
    for q in part.c_members:
        print(q)
    known = {q for q in KNOWN_C if q <= args.limit}
    new = sorted(set(part.c_members) - known)
    gone = sorted(known - set(part.c_members))
    _err(f"|C| = {len(part.c_members)} for q <= {args.limit} (backend {_accel.backend_name()})")
    if new:
        _err(f"WARNING: C members outside the known list: {new}")
    if gone:
        _err(f"WARNING: known C members not reproduced: {gone}")
    return OK if not gone else FAIL


def cmd_qconj(args) -> int:
    import numpy as np

    from .verify import smallest_prime_factors

    if args.limit < 1:
        _err("--limit must be >= 1")
        return USAGE
    part = partition_q(args.limit)
    # 4q + 5 prime  <=>  spf == 0 at 4q + 5
    spf = smallest_prime_factors(9, 4 * args.limit + 5)
    q = np.arange(1, args.limit + 1)
    prime = spf[4 * q + 5 - 9] == 0
    fails = q[prime & ~part.b_mask[1:]]
    print(json.dumps({"limit": args.limit, "composite": int((~prime).sum()),
                      "prime_in_B": int((prime & part.b_mask[1:]).sum()), "failures": len(fails)}))
    for v in fails.tolist():
        _err(f"q-conjecture fails at q = {v}")
    return OK if fails.size == 0 else FAIL


def cmd_run_crt(args) -> int:
    if args.length < 1 or args.start_beta < 0:
        _err("--length must be >= 1 and --start-beta >= 0")
        return USAGE
    cert = build_run(args.length, args.start_beta)
    print(cert.to_json())
    return OK if verify_run(cert, args.samples) else FAIL


def cmd_jacobi(args) -> int:
    if args.m <= 0 or args.m % 2 == 0:
        _err("M must be an odd positive integer")
        return USAGE
    print(jacobi(args.a, args.m))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="erdos-straus", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("decompose", help="certificate for one n")
    s.add_argument("n", type=_int)
    s.set_defaults(fn=cmd_decompose)

    s = sub.add_parser("verify", help="certify every n in a range")
    s.add_argument("--from", dest="frm", type=_int, required=True)
    s.add_argument("--to", type=_int, required=True)
    s.add_argument("--shards", type=_int, default=1)
    s.add_argument("--checkpoint")
    s.add_argument("--out", help="JSONL certificate file")
    s.add_argument("--greedy-cap", type=_int, default=64)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("recheck", help="re-verify a certificate file")
    s.add_argument("path")
    s.set_defaults(fn=cmd_recheck)

    s = sub.add_parser("greedy", help="trace the greedy search")
    s.add_argument("n", type=_int)
    s.add_argument("--numerator", type=_int, choices=(4, 5), default=4)
    s.add_argument("--max-steps", type=_int, default=10_000)
    s.add_argument("--show", type=_int, default=0, help="print only the last SHOW steps")
    s.set_defaults(fn=cmd_greedy)

    s = sub.add_parser("sieve-classes", help="print the cover class table as TSV")
    s.add_argument("--modulus-divisor", type=_int, default=PRIMORIAL_19)
    s.add_argument("--param-bound", type=_int, default=60)
    s.set_defaults(fn=cmd_sieve_classes)

    s = sub.add_parser("qstrong", help="list q <= limit outside A and B")
    s.add_argument("--limit", type=_int, required=True)
    s.set_defaults(fn=cmd_qstrong)

    s = sub.add_parser("qconj", help="check the three q-relations up to limit")
    s.add_argument("--limit", type=_int, required=True)
    s.set_defaults(fn=cmd_qconj)

    s = sub.add_parser("run-crt", help="build and check a run of consecutive classes")
    s.add_argument("--length", type=_int, required=True)
    s.add_argument("--start-beta", type=_int, default=0)
    s.add_argument("--samples", type=_int, default=50)
    s.set_defaults(fn=cmd_run_crt)

    s = sub.add_parser("jacobi", help="Jacobi symbol (A/M)")
    s.add_argument("a", type=_int)
    s.add_argument("m", type=_int)
    s.set_defaults(fn=cmd_jacobi)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
