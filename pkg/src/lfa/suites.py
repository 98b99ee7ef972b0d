"""Randomised verification suites.

Each suite draws fresh instances per trial from ``PCG64`` seeded with
``(seed, trial)`` and records every check.  A check's slack is its
violation: ``|observed - expected| / max(1, |expected|)`` for identities
and ``max(0, lhs - rhs) / max(1, |rhs|)`` for inequalities.  A check
fails when its slack exceeds the tolerance of its class: ``1e-9`` for
algebraic identities, ``1e-12`` for identities that hold by construction
and for inequalities.  ``--tol`` overrides both.
"""

import math
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import oracle
from ._config import EXACT_TOL, REL_TOL
from .errors import ParallelogramViolation
from .generate import gram, lmatrix, lscalar, lvector, rng_for
from .hahn_banach import (ExtensionState, SublinearSpec, complexify, hb_extend_full,
                          hb_extend_step, hb_interval, norming_functional,
                          real_part_functional, realify)
from .hilbert import (GramForm, adjoint, cauchy_schwarz_gap, check_parallelogram, gram_norm,
                      gram_operator_norm, inner, orth_decompose, parallelogram_defect, polarize,
                      project_box, project_submodule, realize_support, recover_gram,
                      riesz_constructive, riesz_direct, span_support)
from .io import to_json
from .lp import (LpElement, dual_from_functional, duality_pairing, functional_from_dual,
                 functional_norm, holder, lp_norm, minkowski, project_PF, series_sum)
from .normed import (INF, NormSpec, lattice_refine, norm, pconvex_distance, quotient_seminorm,
                     reverse_triangle_gap, vector_normalise, vector_support)
from .operators import Bidual, operator_norm
from .scalar import (COMPLEX, REAL, AtomSpace, Idempotent, LScalar, approx_invertibles,
                     freudenthal, inf_family, invert, join_all, local_solve, modulus,
                     normalise_scalar, power, pseudo_inverse, range_projection_seq, sup_family,
                     support)
from .vectors import LMatrix, LVector, apply, compose, functional, mask

P_VALUES = (1.0, 1.5, 2.0, 3.0, INF)
EXACT_P = (1.0, 2.0, INF)
MC_SAMPLES = 1000
FUZZ_POINTS = 1000
HB_ORACLE_ATOMS = 2


class Checker:
    """Collects the outcome of every check in a suite run."""

    def __init__(self, tol=None):
        self.tol = tol
        self.failures = []
        self.max_slack = 0.0
        self.checks = 0
        self.seed = None
        self.trial = None
        self.instance = None

    def start(self, seed, trial, instance=None):
        self.seed, self.trial, self.instance = seed, trial, instance

    def _limit(self, kind):
        if self.tol is not None:
            return self.tol
        return {"rel": REL_TOL, "exact": EXACT_TOL}[kind]

    def _record(self, name, slack, observed, expected, kind, limit=None):
        self.checks += 1
        slack = float(slack)
        if not math.isfinite(slack):
            slack = float("inf")
        self.max_slack = max(self.max_slack, slack)
        if slack > (limit if limit is not None else self._limit(kind)):
            inst = self.instance() if callable(self.instance) else self.instance
            self.failures.append({
                "seed": self.seed, "trial": self.trial, "check": name,
                "instance": to_json(inst) if inst is not None else None,
                "observed": to_json(observed), "expected": to_json(expected),
                "slack": slack if math.isfinite(slack) else "inf",
            })
            return False
        return True

    def eq(self, name, observed, expected, kind="rel", limit=None):
        obs = np.asarray(_values(observed))
        exp = np.asarray(_values(expected))
        err = np.abs(obs - exp) / np.maximum(1.0, np.abs(exp))
        slack = err.max() if err.size else 0.0
        return self._record(name, slack, obs, exp, kind, limit)

    def le(self, name, lhs, rhs, kind="exact", limit=None):
        lhs = np.asarray(_values(lhs), dtype=float)
        rhs = np.asarray(_values(rhs), dtype=float)
        err = np.maximum(0.0, lhs - rhs) / np.maximum(1.0, np.abs(rhs))
        slack = err.max() if err.size else 0.0
        return self._record(name, slack, lhs, rhs, kind, limit)

    def true(self, name, cond, observed=None):
        return self._record(name, 0.0 if cond else float("inf"), observed, True, "exact")


def _values(v):
    if isinstance(v, (LScalar,)):
        return v.values
    if isinstance(v, Idempotent):
        return v.bits.astype(float)
    if isinstance(v, (LVector, LMatrix)):
        return v.data
    return v


@dataclass
class SuiteReport:
    suite: str
    trials: int
    failures: list = dc_field(default_factory=list)
    max_abs_slack: float = 0.0
    wall_time: float = None
    checks: int = 0

    def as_dict(self):
        return {"suite": self.suite, "trials": self.trials, "checks": self.checks,
                "failures": self.failures, "max_abs_slack": self.max_abs_slack,
                "wall_time": self.wall_time}

    @property
    def ok(self):
        return not self.failures


# -- small helpers -----------------------------------------------------------

def _rand_p(rng, choices=P_VALUES):
    return choices[int(rng.integers(len(choices)))]


def _space_of(atoms):
    return AtomSpace(atoms)


def _masked_scalar(rng, atoms, field, zero_prob=0.3):
    return lscalar(rng, atoms, field, zero_prob=zero_prob)


def _random_spec(rng, atoms, dim, field):
    r = rng.integers(3)
    if r == 0:
        return NormSpec("p", _rand_p(rng))
    if r == 1:
        return NormSpec("gram", gram=gram(rng, atoms, dim, field).G)
    w = tuple(LScalar(0.2 + rng.random(atoms), field=REAL, space=_space_of(atoms))
              for _ in range(dim))
    return NormSpec("weighted", _rand_p(rng), weights=w)


def _sparse_vector(rng, atoms, dim, field):
    x = lvector(rng, atoms, dim, field)
    keep = Idempotent(rng.random(atoms) < 0.75, x.space)
    return mask(x, keep)


# -- suites ------------------------------------------------------------------

def suite_sup_lemmas(ck, rng, atoms, dim, field):
    ka, kb = int(rng.integers(1, 6)), int(rng.integers(1, 6))
    A = [lscalar(rng, atoms) for _ in range(ka)]
    B = [lscalar(rng, atoms) for _ in range(kb)]
    lam = lscalar(rng, atoms, positive=True, zero_prob=0.2)
    ck.instance = {"A": A, "B": B, "lambda": lam}
    AB = [a + b for a in A for b in B]
    ck.eq("sup(A+B)", sup_family(AB), sup_family(A) + sup_family(B), "exact")
    ck.eq("inf(A+B)", inf_family(AB), inf_family(A) + inf_family(B), "exact")
    ck.eq("sup(lam A)", sup_family([lam * a for a in A]), lam * sup_family(A), "exact")
    ck.eq("inf(lam A)", inf_family([lam * a for a in A]), lam * inf_family(A), "exact")
    # Boolean algebra of idempotents
    pis = [Idempotent(rng.random(atoms) < 0.5, _space_of(atoms)) for _ in range(3)]
    j = join_all(pis)
    ck.true("join idempotent", (j.as_scalar() * j.as_scalar()) == j.as_scalar())
    ck.true("pi meet complement", (pis[0] & ~pis[0]).is_zero())
    ck.true("pi join complement", (pis[0] | ~pis[0]) == Idempotent.one(_space_of(atoms)))
    # power monotone and the r-power inequality
    s = lscalar(rng, atoms, positive=True)
    t = s + lscalar(rng, atoms, positive=True)
    p = float(rng.uniform(0, 4))
    ck.le("power monotone", power(s, p), power(t, p))
    r = float(rng.uniform(0, 1))
    lhs = np.abs(power(t, r).values - power(s, r).values)
    ck.le("r-power inequality", lhs, np.abs(t.values - s.values) ** r)


def suite_modulus(ck, rng, atoms, dim, field):
    lam = _masked_scalar(rng, atoms, field)
    mu = _masked_scalar(rng, atoms, field)
    ck.instance = {"lambda": lam, "mu": mu}
    ck.eq("|lam mu|", modulus(lam * mu), modulus(lam) * modulus(mu), "exact")
    ck.le("triangle", modulus(lam + mu), modulus(lam) + modulus(mu))
    ck.true("|lam| = 0 iff lam = 0", support(modulus(lam)) == support(lam))
    ck.eq("unit", lam * LScalar.one(lam.space, field), lam, "exact")
    zeta = np.exp(2j * np.pi * np.arange(1024) / 1024)
    sampled = np.max(np.real(zeta[:, None] * lam.values[None, :]), axis=0)
    ck.eq("sampled circle sup", sampled, modulus(lam), limit=1e-4)
    inv = approx_invertibles(lam, 3)
    ck.eq("inverse", inv * invert(inv), LScalar.one(lam.space, field), "exact")
    # inverse reverses order on positive invertibles
    a = lscalar(rng, atoms, positive=True) + 0.1
    b = a + lscalar(rng, atoms, positive=True)
    ck.le("inverse antitone", invert(b), invert(a))


def suite_support_normalise(ck, rng, atoms, dim, field):
    lam = _masked_scalar(rng, atoms, field)
    x = _sparse_vector(rng, atoms, dim, field)
    spec = _random_spec(rng, atoms, dim, field)
    ck.instance = {"lambda": lam, "x": x, "spec": spec}
    n_lam = normalise_scalar(lam)
    ck.eq("|lam| n_lam = lam", modulus(lam).as_field(field) * n_lam, lam, "exact")
    ck.eq("lam n_conj(lam) = |lam|", lam * normalise_scalar(lam.conj()), modulus(lam).as_field(field), "exact")
    ck.eq("|n_lam| = support", modulus(n_lam), support(lam).as_scalar(), "exact")
    kappa, pi = pseudo_inverse(lam)
    ck.true("pseudo-inverse support", pi == support(lam))
    ck.eq("kappa lam = pi", kappa * lam, pi.as_scalar(field), "exact")
    mu = _masked_scalar(rng, atoms, field)
    sub = Idempotent(pi.bits & (rng.random(atoms) < 0.7), lam.space)
    k2 = local_solve(lam, mu, sub)
    ck.eq("local solve", k2 * lam, sub * mu, "exact")

    # range projections
    pos = modulus(lam)
    prev = range_projection_seq(pos, 1)
    for n in (2, 4, 16, 1024):
        cur = range_projection_seq(pos, n)
        ck.le("range projection increasing", prev, cur)
        prev = cur
    gap = support(pos).as_scalar() - prev
    bound = np.where(pos.values > 0, (1 / 1024) / np.where(pos.values > 0, pos.values, 1), 0)
    ck.le("range projection bound", gap.values, bound)
    ck.le("range projection below support", prev, support(pos).as_scalar())

    # approximation by invertibles
    for n in (1, 2, 7):
        ln = approx_invertibles(lam, n)
        ck.eq("|lam - lam_n| = 1/n", modulus(lam - ln).values, np.full(atoms, 1.0 / n), "exact")
        ck.true("lam_n invertible", bool(np.all(ln.values != 0)))
    ck.le("lam_n decreasing (lam >= 0)", approx_invertibles(pos, 5), approx_invertibles(pos, 4))
    neg = -pos
    ck.le("lam_n increasing (lam <= 0)", approx_invertibles(neg, 4, sign=-1),
          approx_invertibles(neg, 5, sign=-1))

    # the eight clauses for vectors
    nx = norm(x, spec)
    u = vector_normalise(x, spec)
    pi_x = vector_support(x)
    ck.eq("(i) ||n_x|| = pi_x", norm(u, spec), pi_x.as_scalar(), "exact")
    ck.eq("(i) sup ||x||/(||x||+1/n)", range_projection_seq(nx, 2 ** 40), pi_x.as_scalar(), limit=1e-9)
    ck.true("(ii) ||n_x|| idempotent", support(nx) == pi_x)
    ck.eq("(iii) ||x|| = pi_x ||x||", pi_x * nx, nx, "exact")
    inv_atoms = nx.values > 0
    if inv_atoms.all():
        ck.eq("(iv) n_x = x/||x||", u, x.scale(invert(nx).as_field(field)), "exact")
    ck.eq("(v) pi_x x = x", x.scale(pi_x), x, "exact")
    ck.eq("(vi) ||x|| n_x = x", u.scale(nx.as_field(field)), x, "exact")
    rho = Idempotent(pi_x.bits | (rng.random(atoms) < 0.5), x.space)
    if x.scale(rho) == x:
        ck.true("(vii) minimality", pi_x <= rho)
    for v, tag in ((x, "x"), (u, "n_x")):
        nv = norm(v, spec)
        tests = [
            bool(np.all(np.minimum(np.abs(nv.values), np.abs(nv.values - 1)) <= 1e-12)),
            v.scale(nv.as_field(field)).allclose(v, 0, 1e-12),
            v.allclose(vector_normalise(v, spec), 0, 1e-12),
            bool(np.all(np.abs(vector_support(v).as_scalar().values - nv.values) <= 1e-12)),
        ]
        ck.true(f"(viii) equivalences for {tag}", len(set(tests)) == 1, tests)


def suite_freudenthal(ck, rng, atoms, dim, field):
    lam = LScalar(np.abs(rng.standard_normal(atoms)) * rng.choice([1.0, 4.0, 30.0]),
                  field=REAL, space=_space_of(atoms))
    ck.instance = {"lambda": lam}
    prev = None
    for n in range(1, 21):
        ln = freudenthal(lam, n)
        ck.le("below lambda", ln, lam)
        if prev is not None:
            ck.le("increasing", prev, ln)
        inside = lam.values <= n
        ck.le("dyadic error", np.where(inside, lam.values - ln.values, 0.0), np.full(atoms, 2.0 ** -n))
        ck.true("step function", len(np.unique(ln.values)) <= n * 2 ** n + 1)
        if n in (1, 5, 20):
            expected = [oracle.freudenthal(float(v), n) for v in lam.values]
            ck.eq("oracle", ln, expected, "exact")
        prev = ln
    grid = LScalar(np.floor(lam.values * 8) / 8, field=REAL, space=lam.space)
    grid = LScalar(np.minimum(grid.values, 3.0), field=REAL, space=lam.space)
    ck.eq("fixed point", freudenthal(grid, 3), grid, "exact")


def suite_norm_axioms(ck, rng, atoms, dim, field):
    spec = _random_spec(rng, atoms, dim, field)
    x = _sparse_vector(rng, atoms, dim, field)
    y = lvector(rng, atoms, dim, field)
    z = lvector(rng, atoms, dim, field)
    lam = _masked_scalar(rng, atoms, field)
    ck.instance = {"spec": spec, "x": x, "y": y, "z": z, "lambda": lam}
    ck.eq("homogeneity", norm(x.scale(lam), spec), modulus(lam) * norm(x, spec), "exact")
    ck.le("triangle", norm(x + y, spec), norm(x, spec) + norm(y, spec))
    ck.le("reverse triangle", -reverse_triangle_gap(x, y, spec).values, np.zeros(atoms))
    ck.true("definite", support(norm(x, spec)) == vector_support(x))
    pi = Idempotent(rng.random(atoms) < 0.5, x.space)
    a, b = mask(x, pi), mask(y, ~pi)
    ck.eq("disjoint additivity", norm(a + b, spec), norm(a, spec) + norm(b, spec), "exact")
    v = lattice_refine(x, y, z, spec)
    ck.eq("lattice refine", norm(x - v, spec),
          np.minimum(norm(x - y, spec).values, norm(x - z, spec).values), "exact")
    gens = [lvector(rng, atoms, dim, field) for _ in range(int(rng.integers(1, 5)))]
    dist, arg = pconvex_distance(x, gens, spec)
    brute = np.min([norm(x - g, spec).values for g in gens], axis=0)
    ck.eq("P-convex distance", dist, brute, "exact")
    ck.eq("P-convex argmin", norm(x - arg, spec), dist, "exact")
    Y = [lvector(rng, atoms, dim, field) for _ in range(int(rng.integers(0, dim + 1)))]
    rho = quotient_seminorm(x, Y)
    expect = []
    for w in range(atoms):
        _, r = oracle.project_ls(x.data[w], [g.data[w] for g in Y])
        expect.append(oracle.norm_p(r, 2))
    ck.eq("quotient seminorm oracle", rho, expect, "rel")
    ck.eq("quotient homogeneity", quotient_seminorm(x.scale(lam), Y), modulus(lam) * rho, "rel")


def _pair_lists(rng, atoms, field, k):
    lams = [_masked_scalar(rng, atoms, field, 0.1) for _ in range(k)]
    mus = [_masked_scalar(rng, atoms, field, 0.1) for _ in range(k)]
    return lams, mus


def suite_holder(ck, rng, atoms, dim, field):
    p = _rand_p(rng)
    k = int(rng.integers(1, 7))
    lams, mus = _pair_lists(rng, atoms, field, k)
    ck.instance = {"p": p, "lambdas": lams, "mus": mus}
    lhs, rhs = holder(lams, mus, p)
    ck.le("holder", lhs, rhs)
    zero = [LScalar.zero(lams[0].space, field) for _ in range(k)]
    lhs0, rhs0 = holder(lams, zero, p)
    ck.eq("mu = 0", lhs0, np.zeros(atoms), "exact")
    ck.eq("mu = 0 rhs", rhs0, np.zeros(atoms), "exact")
    l2, r2 = holder(lams, lams, 2.0)
    ck.eq("parallel p = 2", l2, r2, "rel")
    if 1 < p < INF:
        # mu_k = |lam_k|^(p-1) attains equality
        eq_mus = [power(modulus(l), p - 1) for l in lams]
        le, re = holder([modulus(l) for l in lams], eq_mus, p)
        ck.eq("equality case", le, re, "rel")


def suite_minkowski(ck, rng, atoms, dim, field):
    p = _rand_p(rng, (1.0, 1.5, 2.0, 3.0))
    k = int(rng.integers(1, 7))
    lams, mus = _pair_lists(rng, atoms, field, k)
    ck.instance = {"p": p, "lambdas": lams, "mus": mus}
    lhs, rhs = minkowski(lams, mus, p)
    ck.le("minkowski", lhs, rhs)
    zero = [LScalar.zero(lams[0].space, field) for _ in range(k)]
    l0, r0 = minkowski(lams, zero, p)
    ck.eq("mu = 0", l0, r0, "exact")
    l1, r1 = minkowski(lams, lams, p)
    ck.eq("mu = lam", l1, r1, "rel")
    # finite series and l^p elements
    terms = [lvector(rng, atoms, dim, field) for _ in range(k)]
    total, cert = series_sum(terms)
    perm = [terms[i] for i in rng.permutation(k)]
    ck.eq("series permutation", series_sum(perm)[0], total, "exact")
    ck.le("absolute convergence", norm(total), cert)
    S = tuple(f"s{i}" for i in range(k))
    f = LpElement(S, p, dict(zip(S, terms)))
    lam = _masked_scalar(rng, atoms, field)
    ck.eq("lp homogeneity", lp_norm(f.scale(lam)), modulus(lam) * lp_norm(f), "exact")
    prev = lp_norm(f)
    for j in range(k + 1):
        tail = lp_norm(f - project_PF(f, S[:j]))
        ck.le("P_F tail decreasing", tail, prev)
        prev = tail
    ck.eq("P_S f = f", prev, np.zeros(atoms), "exact")


def suite_lp_duality(ck, rng, atoms, dim, field):
    p = _rand_p(rng, (1.0, 2.0))
    d = min(dim, 4)
    k = int(rng.integers(1, 7))
    S = tuple(f"s{i}" for i in range(k))
    q = INF if p == 1 else 2.0
    g = LpElement(S, q, {s: _sparse_vector(rng, atoms, d, field) for s in S}, NormSpec("p", q))
    f = LpElement(S, p, {s: lvector(rng, atoms, d, field) for s in S}, NormSpec("p", p))
    ck.instance = {"p": p, "g": g, "f": f}
    phi = functional_from_dual(g)
    ck.eq("||phi_g|| = ||g||_q", functional_norm(phi, p, NormSpec("p", p)), lp_norm(g), "rel")
    back = dual_from_functional(phi, p, NormSpec("p", p))
    for s in S:
        ck.eq("g -> phi_g -> g", back[s], g[s], "exact")
    rows = {s: LMatrix(lmatrix(rng, atoms, 1, d, field).data, field=field, space=g.space) for s in S}
    from .lp import SlotFunctional
    psi = SlotFunctional(rows)
    again = functional_from_dual(dual_from_functional(psi, p, NormSpec("p", p)))
    for s in S:
        ck.eq("phi -> g_phi -> phi", again.rows[s], rows[s], "exact")
    ck.le("pairing bound", modulus(duality_pairing(f, g)), lp_norm(f) * lp_norm(g))
    # scalar self-duality
    e = LpElement(S, p, {s: (LVector.basis(g.space, 1, 0, field) if s == S[0]
                             else LVector.zeros(g.space, 1, field)) for s in S})
    ck.eq("self-dual basis", functional_norm(functional_from_dual(e), p, NormSpec("p", p)),
          np.ones(atoms), "exact")


def _mc_sup(rng, T, p_in, p_out, samples=MC_SAMPLES):
    n, r, c = T.data.shape
    X = rng.standard_normal((samples, n, c))
    if T.field == COMPLEX:
        X = X + 1j * rng.standard_normal(X.shape)
    # include signed vertices of the l^1 and l^inf balls
    X[:c, :, :] = np.eye(c)[:, None, :]
    if samples > 2 * c:
        X[c] = rng.choice([-1.0, 1.0], size=(n, c))

    def pn(a, p):
        a = np.abs(a)
        if p == INF:
            return a.max(axis=-1)
        return (a ** p).sum(axis=-1) ** (1 / p)

    Y = np.einsum("nrc,snc->snr", T.data, X)
    return (pn(Y, p_out) / pn(X, p_in)).max(axis=0)


SUPPORTED_PAIRS = tuple((a, b) for a in EXACT_P for b in EXACT_P if a == 1 or b == INF or a == b == 2)


def suite_opnorm(ck, rng, atoms, dim, field):
    rows, cols = int(rng.integers(1, dim + 1)), int(rng.integers(1, dim + 1))
    T = lmatrix(rng, atoms, rows, cols, field)
    p_in, p_out = SUPPORTED_PAIRS[int(rng.integers(len(SUPPORTED_PAIRS)))]
    ck.instance = {"T": T, "p_in": p_in, "p_out": p_out}
    nT = operator_norm(T, p_in, p_out)
    ck.le("Monte-Carlo below norm", _mc_sup(rng, T, p_in, p_out), nT.values, limit=1e-9)
    expect = [oracle.opnorm_p(T.data[w], p_in, p_out) for w in range(atoms)]
    ck.eq("classical induced norm", nT, expect, "rel")
    x = lvector(rng, atoms, cols, field)
    y = lvector(rng, atoms, cols, field)
    ck.le("Lipschitz", norm(apply(T, x) - apply(T, y), NormSpec("p", p_out)),
          nT * norm(x - y, NormSpec("p", p_in)), limit=1e-9)
    p = _rand_p(rng, EXACT_P)
    S = lmatrix(rng, atoms, int(rng.integers(1, dim + 1)), rows, field)
    T2 = lmatrix(rng, atoms, rows, cols, field)
    ck.le("submultiplicative", operator_norm(compose(S, T2), p, p),
          operator_norm(S, p, p) * operator_norm(T2, p, p), limit=1e-9)
    eye = LMatrix.identity(T.space, cols, field)
    ck.eq("identity", operator_norm(eye, p, p), np.ones(atoms), "exact")
    J = Bidual(x, p)
    ck.eq("bidual isometry", J.norm(), norm(x, NormSpec("p", p)), "rel")


def _hb_instance(rng, atoms, dim):
    """A dominated functional on a random subspace and a direction ``z``."""
    space = _space_of(atoms)
    m = int(rng.integers(0, 4))
    with_norm = m == 0 or rng.random() < 0.7
    norm_p = 1.0 if rng.random() < 0.5 else INF
    psis = tuple(LMatrix(rng.standard_normal((atoms, 1, dim)), field=REAL, space=space) for _ in range(m))
    mu = LScalar(0.2 + rng.random(atoms), field=REAL, space=space) if with_norm else None
    sigma = SublinearSpec(psis, mu, norm_p)
    # f in the subdifferential of sigma at 0: convex mix of psis plus a dual-ball point
    f = np.zeros((atoms, dim))
    if m:
        w = rng.dirichlet(np.ones(m), size=atoms)
        f += np.einsum("nm,mnd->nd", w, np.stack([p.data[:, 0, :] for p in psis]))
    if with_norm:
        if norm_p == 1.0:
            u = rng.uniform(-1, 1, (atoms, dim))
        else:
            u = rng.standard_normal((atoms, dim))
            u /= np.maximum(np.abs(u).sum(axis=1, keepdims=True), 1e-300) * rng.uniform(1, 2, (atoms, 1))
        f += mu.values[:, None] * u
    k = int(rng.integers(0, dim))
    basis = []
    for _ in range(k):
        b = lvector(rng, atoms, dim)
        if rng.random() < 0.3:
            b = mask(b, Idempotent(rng.random(atoms) < 0.6, space))
        basis.append(b)
    fvec = LVector(f, field=REAL, space=space)
    values = [functional(fvec)(b) for b in basis]
    if basis:
        state = ExtensionState.from_values(basis, values, sigma)
    else:
        state = ExtensionState.trivial(space, dim, sigma)
    z = lvector(rng, atoms, dim)
    return state, z, fvec


def _sigma_batch(sigma, Y):
    # Y: (s, n, d) real samples
    out = np.zeros(Y.shape[:2])
    if sigma.psis:
        P = np.stack([p.data[:, 0, :] for p in sigma.psis])  # (m, n, d)
        out = np.einsum("mnd,snd->msn", P, Y).max(axis=0)
    if sigma.norm_mu is not None:
        a = np.abs(Y)
        nrm = a.sum(axis=2) if sigma.norm_p == 1 else a.max(axis=2)
        out = out + sigma.norm_mu.values[None, :] * nrm
    return out


def _fuzz(rng, gens, atoms, points=FUZZ_POINTS):
    """Points of the span of ``gens`` with mixed-sign scalar coefficients."""
    G = np.stack([g.data for g in gens])  # (k, n, d)
    C = rng.standard_normal((points, len(gens), atoms))
    C *= rng.random(C.shape) < 0.8  # exact zeros on some atoms
    return np.einsum("skn,knd->snd", C, G)


def suite_hb(ck, rng, atoms, dim, field):
    state, z, fvec = _hb_instance(rng, atoms, dim)
    sigma = state.sigma
    ck.instance = {"basis": list(state.domain_basis), "coeffs": state.coeffs, "sigma": sigma, "z": z}
    eta, xi = hb_interval(state, z)
    ck.le("eta <= xi", eta, xi, limit=1e-9)
    B = state.basis_array()
    v = np.einsum("nd,ndk->nk", state.coeffs.data, B)
    for w in rng.choice(atoms, size=min(atoms, HB_ORACLE_ATOMS), replace=False):
        psis = np.array([p.data[w, 0] for p in sigma.psis]).reshape(-1, dim)
        mu = None if sigma.norm_mu is None else float(sigma.norm_mu.values[w])
        e_o, x_o = oracle.hb_interval_lp(B[w], v[w], z.data[w], psis, mu, sigma.norm_p)
        ck.eq("oracle eta", eta.values[w], e_o, "rel")
        ck.eq("oracle xi", xi.values[w], x_o, "rel")
    gens = list(state.domain_basis) + [z]
    Y = _fuzz(rng, gens, atoms)
    for rule in ("lower", "midpoint", "upper"):
        new = hb_extend_step(state, z, rule)
        phi_vals = np.einsum("nd,snd->sn", new.coeffs.data, Y)
        ck.le(f"domination ({rule})", phi_vals, _sigma_batch(sigma, Y), limit=1e-9)
        if state.domain_basis:
            Bn = np.einsum("nd,ndk->nk", new.coeffs.data, B)
            ck.eq(f"extends phi ({rule})", Bn, v, "rel")
    full = hb_extend_full(state)
    Xs = rng.standard_normal((FUZZ_POINTS, atoms, dim))
    ck.le("full extension domination", np.einsum("nd,snd->sn", full.coeffs.data, Xs),
          _sigma_batch(sigma, Xs), limit=1e-9)
    if state.domain_basis:
        ck.eq("full extension agrees", np.einsum("nd,ndk->nk", full.coeffs.data, B), v, "rel")

    # complex version: a real functional dominated by the Euclidean norm
    space = z.space
    a = rng.standard_normal((atoms, 2 * dim))
    a /= np.linalg.norm(a, axis=1, keepdims=True) * rng.uniform(1, 2, (atoms, 1))
    Psi = LMatrix(a[:, None, :], field=REAL, space=space)
    Phi = complexify(Psi)
    X = rng.standard_normal((200, atoms, dim)) + 1j * rng.standard_normal((200, atoms, dim))
    vals = np.einsum("nd,snd->sn", Phi.data[:, 0, :], X)
    ck.le("complex domination", np.abs(vals), np.linalg.norm(X, axis=2), limit=1e-9)
    xr = realify(LVector(X[0], field=COMPLEX, space=space))
    ck.eq("Re Phi = Psi", np.real(vals[0]), Psi(xr).values, "rel")
    phi = LMatrix(lmatrix(rng, atoms, 1, dim, COMPLEX).data, field=COMPLEX, space=space)
    ck.eq("complexify(Re phi) = phi", complexify(real_part_functional(phi)), phi, "exact")

    # norming functionals and the bidual embedding
    x = _sparse_vector(rng, atoms, dim, field)
    for p in EXACT_P:
        xs = norming_functional(x, p)
        ck.eq(f"x*(x) = ||x|| (p={p})", xs(x), norm(x, NormSpec("p", p)).as_field(x.field), "rel")
        ck.eq(f"||x*|| = pi_x (p={p})", operator_norm(xs, p, p), vector_support(x).as_scalar(), "rel")
        ck.eq(f"J isometric (p={p})", Bidual(x, p).norm(), norm(x, NormSpec("p", p)), "rel")


def suite_polarize(ck, rng, atoms, dim, field):
    G = gram(rng, atoms, dim, field)
    x, y = lvector(rng, atoms, dim, field), lvector(rng, atoms, dim, field)
    ck.instance = {"G": G, "x": x, "y": y}
    normfn = lambda v: gram_norm(v, G)  # noqa: E731
    sq = lambda v: normfn(v).values ** 2  # noqa: E731
    ck.eq("parallelogram", parallelogram_defect(normfn, x, y) / (1 + sq(x) + sq(y)),
          np.zeros(atoms), limit=1e-12)
    ck.eq("polarization", polarize(normfn, x, y), inner(x, y, G), "rel")
    ck.eq("polarize(x, x)", polarize(normfn, x, x, check=False), sq(x), "rel")
    ck.eq("recover Gram", recover_gram(normfn, x.space, dim, field), G.G, "rel")
    lam = _masked_scalar(rng, atoms, field)
    ck.eq("<lam x, y>", inner(x.scale(lam), y, G), lam * inner(x, y, G), "rel")
    ck.eq("conjugate symmetry", inner(x, y, G), inner(y, x, G).conj(), "rel")
    ck.le("Cauchy-Schwarz", -cauchy_schwarz_gap(x, y, G).values, np.zeros(atoms))
    # semi-definite Gram with deficient rank
    A = rng.standard_normal((atoms, max(dim - 1, 1), dim))
    Gs = GramForm(LMatrix(np.swapaxes(A, 1, 2) @ A, field=REAL, space=x.space), definite=False)
    xr, yr = lvector(rng, atoms, dim), lvector(rng, atoms, dim)
    ck.le("Cauchy-Schwarz (semi)", -cauchy_schwarz_gap(xr, yr, Gs).values, np.zeros(atoms), limit=1e-9)
    # Pythagoras
    c = inner(y, x, G) * invert(inner(x, x, G))
    yp = y - x.scale(c)
    ck.eq("Pythagoras", sq(x + yp), sq(x) + sq(yp), "rel")
    if dim >= 2:
        l1 = lambda v: norm(v, NormSpec("p", 1.0))  # noqa: E731
        e1 = LVector.basis(x.space, dim, 0, field)
        e2 = LVector.basis(x.space, dim, 1, field)
        try:
            check_parallelogram(l1, e1, e2)
            rejected = False
        except ParallelogramViolation:
            rejected = True
        ck.true("p = 1 rejected", rejected)


def _generators(rng, atoms, dim, field):
    k = int(rng.integers(1, dim + 1))
    gens = [lvector(rng, atoms, dim, field) for _ in range(k)]
    if rng.random() < 0.3 and k > 1:
        gens[-1] = gens[0].scale(_masked_scalar(rng, atoms, field, 0.0))  # rank deficiency
    if rng.random() < 0.3:
        gens[0] = mask(gens[0], Idempotent(rng.random(atoms) < 0.5, gens[0].space))
    return gens


def suite_projection(ck, rng, atoms, dim, field):
    G = gram(rng, atoms, dim, field)
    M = _generators(rng, atoms, dim, field)
    x = lvector(rng, atoms, dim, field)
    ck.instance = {"G": G, "M": M, "x": x}
    Px, r = project_submodule(x, M, G)
    scale = gram_norm(x, G).values
    for g in M:
        ck.le("orthogonal residual", modulus(inner(r, g, G)).values,
              1e-9 * np.maximum(1, scale * gram_norm(g, G).values), limit=0.0)
    for w in range(atoms):
        px_o, _ = oracle.project_ls(x.data[w], [g.data[w] for g in M], G.G.data[w])
        ck.eq("oracle projection", Px.data[w], px_o, "rel")
    C = rng.standard_normal((MC_SAMPLES, len(M), atoms))
    if field == COMPLEX:
        C = C + 1j * rng.standard_normal(C.shape)
    Ms = np.einsum("skn,knd->snd", C, np.stack([g.data for g in M]))
    D = x.data[None] - Ms
    dist = np.sqrt(np.maximum(np.real(np.einsum("sni,nij,snj->sn", np.conj(D), G.G.data, D)), 0))
    ck.le("optimality", gram_norm(r, G).values[None, :], dist, limit=1e-9)
    dec = orth_decompose(M, G, x)
    P = dec.projector
    ck.eq("P^2 = P", P @ P, P, "rel")
    ck.le("contractive", gram_norm(Px, G), gram_norm(x, G), limit=1e-9)
    z = realize_support(M, G, x)
    ck.eq("realize support", gram_norm(z, G), span_support(M).as_scalar(), "rel")
    if field == REAL:
        a = lvector(rng, atoms, dim)
        b = LVector(a.data + np.abs(rng.standard_normal((atoms, dim))), field=REAL, space=a.space)
        xb = x.scale(3.0)
        c = project_box(xb, a, b)
        S = rng.uniform(a.data, b.data, (200, atoms, dim))
        ck.le("box optimality", np.linalg.norm(xb.data - c.data, axis=1)[None, :],
              np.linalg.norm(xb.data[None] - S, axis=2), limit=1e-12)


def suite_riesz(ck, rng, atoms, dim, field):
    G = gram(rng, atoms, dim, field)
    a = lvector(rng, atoms, dim, field)
    keep = Idempotent(rng.random(atoms) < 0.7, a.space)
    phi = functional(mask(a, keep))
    ck.instance = {"G": G, "phi": phi}
    fd = riesz_direct(phi, G)
    fc = riesz_constructive(phi, G)
    ck.eq("direct = constructive", fc, fd, "rel")
    for k in range(dim):
        e = LVector.basis(a.space, dim, k, field)
        ck.eq("<h, f> = phi(h)", inner(e, fd, G), phi(e).as_field(fd.field), "rel")
    for w in range(atoms):
        ck.eq("oracle solve", fd.data[w], oracle.riesz_solve(phi.data[w, 0], G.G.data[w]), "rel")
    ck.true("support propagation", vector_support(fd) == keep)


def suite_adjoint_cstar(ck, rng, atoms, dim, field):
    rows, cols = int(rng.integers(1, dim + 1)), int(rng.integers(1, dim + 1))
    Gi, Go = gram(rng, atoms, cols, field), gram(rng, atoms, rows, field)
    T = lmatrix(rng, atoms, rows, cols, field)
    ck.instance = {"T": T, "G_in": Gi, "G_out": Go}
    Ts = adjoint(T, Gi, Go)
    for i in range(cols):
        x = LVector.basis(T.space, cols, i, field)
        for j in range(rows):
            y = LVector.basis(T.space, rows, j, field)
            ck.eq("<Tx, y> = <x, T*y>", inner(apply(T, x), y, Go), inner(x, apply(Ts, y), Gi), "rel")
    ck.eq("T** = T", adjoint(Ts, Go, Gi), T, "rel")
    lam = _masked_scalar(rng, atoms, field)
    ck.eq("(lam T)* = conj(lam) T*", adjoint(T.scale(lam), Gi, Go), Ts.scale(lam.conj()), "rel")
    nT = gram_operator_norm(T, Gi, Go)
    ck.eq("||T*|| = ||T||", gram_operator_norm(Ts, Go, Gi), nT, "rel")
    ck.eq("C*-identity", gram_operator_norm(compose(Ts, T), Gi, Gi), nT * nT, "rel")
    for w in range(atoms):
        ck.eq("oracle adjoint", Ts.data[w], oracle.adjoint(T.data[w], Gi.G.data[w], Go.G.data[w]), "rel")
    I_in = GramForm.identity(T.space, cols, field)
    I_out = GramForm.identity(T.space, rows, field)
    ck.eq("identity Gram: conjugate transpose", adjoint(T, I_in, I_out), T.conj_transpose(), "exact")
    ck.eq("Euclidean norm oracle", gram_operator_norm(T, I_in, I_out),
          [oracle.svd_top(T.data[w]) for w in range(atoms)], "rel")
    # unitary per atom
    Q, _ = np.linalg.qr(lmatrix(rng, atoms, dim, dim, field).data)
    U = LMatrix(Q, field=field, space=T.space)
    ck.eq("unitary", compose(adjoint(U), U), LMatrix.identity(T.space, dim, field), "rel")


def suite_oracle_square(ck, rng, atoms, dim, field):
    lam = _masked_scalar(rng, atoms, field)
    x = _sparse_vector(rng, atoms, dim, field)
    T = lmatrix(rng, atoms, dim, dim, field)
    G = gram(rng, atoms, dim, field)
    M = _generators(rng, atoms, dim, field)
    ck.instance = {"lambda": lam, "x": x, "T": T, "G": G, "M": M}
    for obj in (lam, x, T, support(lam)):
        back = oracle.assemble(oracle.slices(obj))
        ck.true(f"slice/assemble {type(obj).__name__}", back == obj)
    pos = modulus(lam)
    p = _rand_p(rng, EXACT_P)
    Px, _ = project_submodule(x, M, G)
    phi = functional(x)
    pairs = [
        ("modulus", modulus(lam), lambda w: oracle.classical_suite("modulus", oracle.slice(lam, w))),
        ("support", support(lam), lambda w: float(oracle.classical_suite("support", oracle.slice(lam, w)))),
        ("normalise", normalise_scalar(lam), lambda w: oracle.classical_suite("normalise", oracle.slice(lam, w))),
        ("freudenthal", freudenthal(pos, 4), lambda w: oracle.classical_suite("freudenthal", oracle.slice(pos, w), 4)),
        ("norm_p", norm(x, NormSpec("p", p)), lambda w: oracle.classical_suite("norm_p", oracle.slice(x, w), p)),
        ("opnorm_p", operator_norm(T, p, p), lambda w: oracle.classical_suite("opnorm_p", oracle.slice(T, w), p)),
        ("svd_top", operator_norm(T, 2, 2), lambda w: oracle.classical_suite("svd_top", oracle.slice(T, w))),
        ("project_ls", Px, lambda w: oracle.classical_suite(
            "project_ls", oracle.slice(x, w), [g.data[w] for g in M], G.G.data[w])[0]),
        ("riesz_solve", riesz_direct(phi, G), lambda w: oracle.classical_suite(
            "riesz_solve", oracle.slice(x, w), G.G.data[w])),
        ("adjoint", adjoint(T, G, G), lambda w: oracle.classical_suite(
            "adjoint", oracle.slice(T, w), G.G.data[w], G.G.data[w])),
    ]
    for name, value, classical in pairs:
        for w in range(atoms):
            got = oracle.slice(value, w).value
            ck.eq(f"square {name}", np.asarray(got, dtype=complex), np.asarray(classical(w), dtype=complex), "rel")
    if field == REAL:
        state, z, _ = _hb_instance(rng, atoms, dim)
        eta, xi = hb_interval(state, z)
        B = state.basis_array()
        v = np.einsum("nd,ndk->nk", state.coeffs.data, B)
        sigma = state.sigma
        w = int(rng.integers(atoms))
        psis = np.array([q.data[w, 0] for q in sigma.psis]).reshape(-1, dim)
        mu = None if sigma.norm_mu is None else float(sigma.norm_mu.values[w])
        e_o, x_o = oracle.classical_suite("hb_interval_lp", B[w], v[w], z.data[w], psis, mu, sigma.norm_p)
        ck.eq("square hb_interval_lp", [eta.values[w], xi.values[w]], [e_o, x_o], "rel")


SUITES = {
    "sup-lemmas": (suite_sup_lemmas, REAL),
    "modulus": (suite_modulus, None),
    "support-normalise": (suite_support_normalise, None),
    "freudenthal": (suite_freudenthal, REAL),
    "norm-axioms": (suite_norm_axioms, None),
    "holder": (suite_holder, None),
    "minkowski": (suite_minkowski, None),
    "lp-duality": (suite_lp_duality, None),
    "opnorm": (suite_opnorm, None),
    "hb": (suite_hb, None),
    "polarize": (suite_polarize, None),
    "projection": (suite_projection, None),
    "riesz": (suite_riesz, None),
    "adjoint-cstar": (suite_adjoint_cstar, None),
    "oracle-square": (suite_oracle_square, None),
}


def run_suite(name, trials=100, atoms=4, dim=3, seed=0, tol=None, field=REAL, timing=False):
    """Run a suite and return its ``SuiteReport``.

    Suites that only make sense over the reals ignore ``field``.
    """
    if name not in SUITES:
        raise KeyError(name)
    for label, v in (("trials", trials), ("atoms", atoms), ("dim", dim)):
        if int(v) < 1:
            raise ValueError(f"{label} must be positive")
    if field not in (REAL, COMPLEX):
        raise ValueError(f"unknown field {field!r}")
    fn, forced = SUITES[name]
    field = forced or field
    ck = Checker(tol)
    start = time.perf_counter()
    for t in range(trials):
        rng = rng_for([seed, t])
        ck.start(seed, t)
        fn(ck, rng, atoms, dim, field)
    elapsed = time.perf_counter() - start
    failures = sorted(ck.failures, key=lambda f: (f["trial"], f["check"]))
    return SuiteReport(name, trials, failures, ck.max_slack, elapsed if timing else None, ck.checks)
