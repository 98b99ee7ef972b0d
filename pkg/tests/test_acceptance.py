"""Acceptance criteria 1-11.

Each criterion prints one PASS/FAIL line.  Suites are spread over the
default scale grid of atom counts and dimensions; run standalone with
``python tests/test_acceptance.py`` or through pytest.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from lfa.cli import main
from lfa.generate import lscalar, rng_for
from lfa.hahn_banach import hb_interval
from lfa.lp import holder, minkowski
from lfa.scalar import LScalar, range_projection_seq, sup_family, support
from lfa.suites import run_suite

GRID = ((1, 1), (2, 2), (4, 3), (8, 5))
BUDGET = 60.0
_elapsed = {}


def grid_run(suite, trials, field="real", seed=0):
    """Split ``trials`` evenly over ``GRID``; returns (ok, max slack, trials, per-atom instances)."""
    per = -(-trials // len(GRID))
    ok, slack, count, inst, first = True, 0.0, 0, 0, None
    for k, (atoms, dim) in enumerate(GRID):
        rep = run_suite(suite, per, atoms, dim, seed + 1000 * k, None, field)
        ok &= rep.ok
        slack = max(slack, rep.max_abs_slack)
        count += per
        inst += per * atoms
        if rep.failures and first is None:
            first = rep.failures[0]
    return ok, slack, count, inst, first


def _suites(specs):
    """Run several ``(suite, trials, field)`` entries; returns (ok, detail)."""
    ok, parts = True, []
    for suite, trials, field in specs:
        good, slack, count, inst, first = grid_run(suite, trials, field)
        ok &= good
        parts.append(f"{suite}/{field} trials={count} slack={slack:.1e}"
                     + ("" if good else f" first failure: {first['check']}"))
    return ok, "; ".join(parts)


# -- criteria --------------------------------------------------------------------

def crit_1():
    ok, detail = _suites([("sup-lemmas", 1000, "real")])
    # sup over sums and positive multiples is exact in floating point
    rng = rng_for(101)
    exact = True
    for _ in range(1000):
        atoms = GRID[int(rng.integers(4))][0]
        A = [lscalar(rng, atoms) for _ in range(int(rng.integers(1, 6)))]
        B = [lscalar(rng, atoms) for _ in range(int(rng.integers(1, 6)))]
        lam = lscalar(rng, atoms, positive=True)
        exact &= sup_family([a + b for a in A for b in B]) == sup_family(A) + sup_family(B)
        exact &= sup_family([lam * a for a in A]) == lam * sup_family(A)
    return ok and exact, detail + f"; direct exact equality over 1000 families: {exact}"


def crit_2():
    return _suites([("support-normalise", 1000, "real"), ("support-normalise", 1000, "complex"),
                    ("modulus", 1000, "complex")])


def crit_3():
    # the suite form of this check runs under criterion 2 at n = 2^10
    rng = rng_for(103)
    lam = LScalar(np.abs(rng.standard_normal(1000)) * (rng.random(1000) < 0.8))
    pi = support(lam).as_scalar().values
    prev = range_projection_seq(lam, 1).values
    mono = True
    for n in range(2, 2 ** 10 + 1):
        cur = range_projection_seq(lam, n).values
        mono &= bool(np.all(cur >= prev))
        prev = cur
    pos = lam.values > 0
    gap = pi - prev
    # per atom the gap is (1/n)/(lam+1/n), below (1/n)/lam and so below (1/n)/min lam
    ratio = np.max(gap[pos] * lam.values[pos] * 2 ** 10)
    bound = (1 / 2 ** 10) / lam.values[pos].min()
    within = bool(np.all(gap >= 0) and ratio <= 1 + 1e-12 and np.all(gap[~pos] == 0) and gap.max() <= bound)
    return mono and within, (f"1000 scalars, n = 1..2^10: monotone={mono} max gap {gap.max():.2e} <= {bound:.2e}, "
                             f"max gap*n*lam {ratio:.3f} <= 1")


def crit_4():
    return _suites([("freudenthal", 1000, "real")])


def crit_5():
    ok, parts, total = True, [], {}
    for suite in ("holder", "minkowski"):
        for field in ("real", "complex"):
            # 10^4 per-atom instances per inequality, half in each field
            good, slack, count, inst, first = grid_run(suite, 1400, field)
            ok &= good
            total[suite] = total.get(suite, 0) + inst
            parts.append(f"{suite}/{field} instances={inst} slack={slack:.1e}")
    enough = all(v >= 10 ** 4 for v in total.values())
    # equality cases: mu = 0 and parallel vectors
    rng = rng_for(105)
    worst = 0.0
    for _ in range(1000):
        lams = [lscalar(rng, 4, "complex") for _ in range(int(rng.integers(1, 7)))]
        c = lscalar(rng, 4, positive=True).as_field("complex")
        zero = [LScalar.zero(lams[0].space, "complex")] * len(lams)
        for p in (1.0, 1.5, 2.0, 3.0):
            l0, r0 = minkowski(lams, zero, p)
            worst = max(worst, float(np.max(np.abs(l0.values - r0.values))))
            l1, r1 = minkowski(lams, [c * lam for lam in lams], p)
            worst = max(worst, float(np.max(np.abs(l1.values - r1.values) / np.maximum(1, r1.values))))
        l0, r0 = holder(lams, zero, 2.0)
        worst = max(worst, float(np.max(np.abs(l0.values)) + np.max(r0.values)))
        l2, r2 = holder(lams, [c * lam for lam in lams], 2.0)
        worst = max(worst, float(np.max(np.abs(l2.values - r2.values) / np.maximum(1, r2.values))))
    eq_ok = worst <= 1e-12
    return ok and enough and eq_ok, "; ".join(parts) + f"; equality cases max gap {worst:.1e}"


def crit_6():
    return _suites([("lp-duality", 1000, "real"), ("lp-duality", 500, "complex")])


def crit_7():
    return _suites([("opnorm", 1000, "real"), ("opnorm", 500, "complex")])


def crit_8():
    ok, detail = _suites([("hb", 1000, "real")])
    # the interval is never inverted, also on random instances outside the suite
    from lfa.suites import _hb_instance
    rng = rng_for(108)
    ordered = True
    for _ in range(200):
        state, z, _ = _hb_instance(rng, 4, 3)
        eta, xi = hb_interval(state, z)
        ordered &= bool(np.all(eta.values <= xi.values + 1e-9))
    return ok and ordered, detail + f"; eta <= xi on 200 extra instances: {ordered}"


def crit_9():
    return _suites([("polarize", 1000, "real"), ("polarize", 250, "complex"),
                    ("projection", 1000, "real"), ("projection", 250, "complex"),
                    ("riesz", 1000, "real"), ("riesz", 500, "complex"),
                    ("adjoint-cstar", 1000, "real"), ("adjoint-cstar", 250, "complex")])


def crit_10():
    return _suites([("oracle-square", 1000, "real"), ("oracle-square", 250, "complex")])


def _cli(argv):
    import contextlib
    import io
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue()


def crit_11():
    same = True
    for suite in ("holder", "hb", "projection", "oracle-square"):
        argv = ["verify", "--suite", suite, "--trials", "50", "--atoms", "4", "--dim", "3", "--seed", "42"]
        a, b = _cli(argv), _cli(argv)
        same &= a == b and a[0] == 0
    matrix = [
        (["verify", "--suite", "holder", "--trials", "1000", "--atoms", "4", "--dim", "3", "--seed", "42"], 0),
        (["verify", "--suite", "nosuch"], 2),
        (["verify", "--suite", "holder", "--trials", "0"], 2),
        (["verify", "--suite", "opnorm", "--trials", "10", "--tol", "1e-300"], 1),
        (["gen", "gram", "--dim", "3", "--atoms", "2", "--seed", "1"], 0),
        (["gen", "nosuch"], 2),
        (["compute", "opnorm", "/nonexistent.json"], 2),
        ([], 2),
    ]
    codes = [(_cli(argv)[0], want) for argv, want in matrix]
    contract = all(got == want for got, want in codes)
    proc = [subprocess.run([sys.executable, "-m", "lfa", "verify", "--suite", "riesz", "--trials", "20",
                            "--seed", "7"], capture_output=True, text=True) for _ in range(2)]
    process = proc[0].returncode == 0 and proc[0].stdout == proc[1].stdout
    process &= json.loads(proc[0].stdout)["wall_time"] is None
    return same and contract and process, (f"byte-identical reports: {same and process}; "
                                           f"exit codes {[g for g, _ in codes]} expected {[w for _, w in matrix]}")


CRITERIA = [
    (1, "lattice sup lemmas", crit_1),
    (2, "support and normalisation", crit_2),
    (3, "range projection", crit_3),
    (4, "Freudenthal approximation", crit_4),
    (5, "Holder and Minkowski", crit_5),
    (6, "l^p duality", crit_6),
    (7, "operator norms", crit_7),
    (8, "Hahn-Banach", crit_8),
    (9, "Hilbert modules", crit_9),
    (10, "master oracle square", crit_10),
    (11, "CLI determinism and exit codes", crit_11),
]


def _line(num, name, ok, detail, dt):
    return f"criterion {num:2d} [{name}]: {'PASS' if ok else 'FAIL'} ({dt:.1f}s) {detail}"


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(num, name, fn, capsys):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    finally:
        dt = _elapsed[num] = time.perf_counter() - t0
    with capsys.disabled():
        print("\n" + _line(num, name, ok, detail, dt))
    assert ok, detail


def test_runtime_budget(capsys):
    total = sum(_elapsed.values())
    with capsys.disabled():
        print(f"\nacceptance runtime: {total:.1f}s over {len(_elapsed)} criteria (budget {BUDGET:.0f}s)")
    assert len(_elapsed) == len(CRITERIA)
    assert total < BUDGET


if __name__ == "__main__":
    start = time.perf_counter()
    all_ok = True
    for num, name, fn in CRITERIA:
        t0 = time.perf_counter()
        ok, detail = fn()
        all_ok &= ok
        print(_line(num, name, ok, detail, time.perf_counter() - t0), flush=True)
    total = time.perf_counter() - start
    print(f"total {total:.1f}s")
    sys.exit(0 if all_ok and total < BUDGET else 1)
