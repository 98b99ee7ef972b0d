"""Numba vs numpy simplex backends on batches of random bounded LPs.

Usage: python benchmarks/bench_simplex.py [--batch 2000] [--vars 6] [--cons 12] [--repeat 5]

Each LP is ``min c.x  s.t.  A x <= b, x >= 0`` with ``b > 0`` (feasible at
the origin) and a row of ones bounding the feasible set.  Both backends
must return identical statuses and matching objectives before timings
are reported.
"""

import argparse
import time

import numpy as np

from lfa._kernels import HAVE_NUMBA, lp_batch
from lfa.generate import rng_for


def make_batch(n, k, m, seed=0):
    rng = rng_for(seed)
    C = rng.standard_normal((n, k))
    A = rng.standard_normal((n, m, k))
    A[:, 0, :] = 1.0  # sum(x) <= b_0 keeps every LP bounded
    B = 1.0 + rng.random((n, m))
    return C, A, B


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--batch", type=int, default=2000)
    ap.add_argument("--vars", type=int, default=6)
    ap.add_argument("--cons", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    C, A, B = make_batch(args.batch, args.vars, args.cons, args.seed)
    print(f"batch={args.batch} vars={args.vars} constraints={args.cons}")

    t_np, (st_np, _, obj_np) = best_of(lambda: lp_batch(C, A, B, backend="numpy"), args.repeat)
    print(f"numpy : {t_np * 1e3:9.2f} ms  ({t_np / args.batch * 1e6:7.2f} us/LP)")
    if not HAVE_NUMBA:
        print("numba : not installed")
        return 0

    t0 = time.perf_counter()
    lp_batch(C[:1], A[:1], B[:1], backend="numba")
    print(f"numba compile + first call: {time.perf_counter() - t0:.2f} s")
    t_nb, (st_nb, _, obj_nb) = best_of(lambda: lp_batch(C, A, B, backend="numba"), args.repeat)
    print(f"numba : {t_nb * 1e3:9.2f} ms  ({t_nb / args.batch * 1e6:7.2f} us/LP)")

    if not np.array_equal(st_np, st_nb):
        print("MISMATCH: statuses differ")
        return 1
    ok = st_np == 0
    gap = float(np.max(np.abs(obj_np[ok] - obj_nb[ok]), initial=0.0))
    print(f"optimal: {int(ok.sum())}/{args.batch}  max objective gap: {gap:.2e}")
    print(f"speedup numba/numpy: {t_np / t_nb:.1f}x")
    return 0 if gap <= 1e-9 else 1


if __name__ == "__main__":
    raise SystemExit(main())
