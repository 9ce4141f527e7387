"""Time each kernel under numba and under plain numpy.

    python3 benchmarks/bench_kernels.py [--repeat 3]

The numba column excludes compilation: every kernel is called once first.
"""
import argparse
import time

import numpy as np

from erdos_straus import _accel
from erdos_straus.kernels import IMPLEMENTATIONS
from erdos_straus.sieve import PRIMORIAL_19, SieveConfig, generate_classes


def _cases():
    classes = generate_classes(SieveConfig(PRIMORIAL_19, 60))
    mod = np.array([c.modulus for c in classes], dtype=np.int64)
    res = np.array([c.residue for c in classes], dtype=np.int64)
    primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    qs = list(range(10**6, 10**6 + 200))
    return {
        "qpoly_bitmap(2.1e6)": ("qpoly_bitmap", lambda f: f(2_100_000)),
        "qpoly_search x200 near 1e6": ("qpoly_search", lambda f: [f(q) for q in qs]),
        "cover_mask(1e6 q)": ("cover_mask", lambda f: f(0, 1_000_000, mod, res)),
        "prime_factor_mask(1e6 q)": ("prime_factor_mask", lambda f: f(0, 1_000_000, primes)),
        "corollary_violation(1000, 100)": ("corollary_violation", lambda f: f(1000, 100)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    print(f"{'kernel':34s} {'numba s':>10s} {'numpy s':>10s} {'ratio':>7s}")
    for label, (name, call) in _cases().items():
        best = {}
        for backend in ("numba", "numpy"):
            f = IMPLEMENTATIONS[backend][name]
            call(f)  # warm-up / compile
            times = []
            for _ in range(args.repeat):
                t = time.perf_counter()
                call(f)
                times.append(time.perf_counter() - t)
            best[backend] = min(times)
        print(f"{label:34s} {best['numba']:10.4f} {best['numpy']:10.4f} {best['numpy'] / best['numba']:7.1f}")


if __name__ == "__main__":
    main()
