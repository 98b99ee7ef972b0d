"""Finite-index l^p spaces of module-valued functions and their duality."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError
from .normed import INF, L2, NormSpec, _pnorm_rows, conjugate_exponent, norm, parse_p
from .scalar import REAL, LScalar, modulus
from .vectors import LMatrix, LVector


@dataclass(frozen=True, eq=False)
class LpElement:
    """A function ``S -> Y`` on a finite ordered index set, normed in l^p."""

    S: tuple
    p: float
    values: dict
    value_norm: NormSpec = field(default=L2)

    def __post_init__(self):
        S = tuple(self.S)
        if len(set(S)) != len(S) or not S:
            raise ValueError("index set must be non-empty with distinct labels")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "p", parse_p(self.p))
        if set(self.values) != set(S):
            raise ShapeError("values must be given on exactly the index set")
        first = self.values[S[0]]
        for s in S[1:]:
            first._check(self.values[s])
        object.__setattr__(self, "values", {s: self.values[s] for s in S})

    @property
    def space(self):
        return self.values[self.S[0]].space

    @property
    def dim(self):
        return self.values[self.S[0]].dim

    @property
    def field(self):
        return self.values[self.S[0]].field

    def __getitem__(self, s):
        return self.values[s]

    def _like(self, values, S=None):
        return LpElement(self.S if S is None else S, self.p, values, self.value_norm)

    def __add__(self, other):
        _check_compatible(self, other)
        return self._like({s: self[s] + other[s] for s in self.S})

    def __sub__(self, other):
        _check_compatible(self, other)
        return self._like({s: self[s] - other[s] for s in self.S})

    def scale(self, lam):
        return self._like({s: self[s].scale(lam) for s in self.S})

    def allclose(self, other, rtol=1e-9, atol=1e-12):
        _check_compatible(self, other)
        return all(self[s].allclose(other[s], rtol, atol) for s in self.S)

    def stacked(self):
        """``(n, |S|, d)`` array of values."""
        return np.stack([self[s].data for s in self.S], axis=1)


def _check_compatible(f, g):
    if f.S != g.S:
        raise ShapeError("index sets differ")
    f[f.S[0]]._check(g[g.S[0]])


def zeros_like(f):
    z = LVector.zeros(f.space, f.dim, f.field)
    return f._like({s: z for s in f.S})


def elementary(S, s, y, p=2.0, value_norm=L2):
    """``e_s (x) y``: the function equal to ``y`` at ``s`` and zero elsewhere."""
    S = tuple(S)
    if s not in S:
        raise KeyError(s)
    z = LVector.zeros(y.space, y.dim, y.field)
    return LpElement(S, p, {t: (y if t == s else z) for t in S}, value_norm)


def slot_norms(f):
    return np.stack([norm(f[s], f.value_norm).values for s in f.S], axis=1)


def lp_norm(f):
    """``(sum_s ||f(s)||^p)^(1/p)``, or the sup over slots when ``p`` is infinite."""
    return LScalar._wrap(_pnorm_rows(slot_norms(f), f.p), REAL, f.space)


def _scalar_stack(lams):
    lams = list(lams)
    if not lams:
        raise ValueError("empty list")
    space = lams[0].space
    for lam in lams:
        space.check(lam.space)
    return np.stack([lam.values for lam in lams], axis=1), space


def _pcombine(a, p, space):
    return LScalar._wrap(_pnorm_rows(a, p), REAL, space)


def holder(lams, mus, p):
    """Both sides of Hölder's inequality ``sum |l_k m_k| <= ||l||_p ||m||_q``."""
    if len(lams) != len(mus):
        raise ShapeError("length mismatch")
    p = parse_p(p)
    q = conjugate_exponent(p)
    a, space = _scalar_stack(lams)
    b, space_b = _scalar_stack(mus)
    space.check(space_b)
    a, b = np.abs(a), np.abs(b)
    lhs = LScalar._wrap((a * b).sum(axis=1), REAL, space)
    rhs = _pcombine(a, p, space) * _pcombine(b, q, space)
    return lhs, rhs


def minkowski(lams, mus, p):
    """Both sides of ``||l + m||_p <= ||l||_p + ||m||_p`` (finite ``p`` only)."""
    if len(lams) != len(mus):
        raise ShapeError("length mismatch")
    p = parse_p(p)
    if p == INF:
        raise ValueError("minkowski is stated for finite p")
    a, space = _scalar_stack(lams)
    b, space_b = _scalar_stack(mus)
    space.check(space_b)
    lhs = _pcombine(np.abs(a + b), p, space)
    rhs = _pcombine(np.abs(a), p, space) + _pcombine(np.abs(b), p, space)
    return lhs, rhs


def series_sum(terms, spec=L2, *, space=None, dim=None, field=REAL):
    """Sum a finite family; returns ``(sum, sum of norms)``.

    The second value certifies absolute convergence and bounds the norm
    of the sum.  Terms are added left to right.  An empty family sums to
    zero, which needs ``space`` and ``dim``.
    """
    terms = list(terms)
    if not terms:
        if space is None or dim is None:
            raise ValueError("empty family needs space and dim")
        return LVector.zeros(space, dim, field), LScalar.zero(space)
    total = terms[0]
    cert = norm(terms[0], spec)
    for t in terms[1:]:
        total = total + t
        cert = cert + norm(t, spec)
    return total, cert


def project_PF(f, F):
    """Keep ``f`` on the index subset ``F`` and zero it elsewhere."""
    F = set(F)
    extra = F - set(f.S)
    if extra:
        raise KeyError(f"not in the index set: {sorted(map(str, extra))}")
    z = LVector.zeros(f.space, f.dim, f.field)
    return f._like({s: (f[s] if s in F else z) for s in f.S})


def dual_value_norm(spec):
    if spec.kind != "p":
        raise ValueError("dual value norms are only provided for p-norms")
    return NormSpec("p", conjugate_exponent(spec.p))


def duality_pairing(f, g):
    """``B(f, g) = sum_s <f(s), g(s)>`` with the bilinear slot pairing."""
    if f.S != g.S:
        raise ShapeError("index sets differ")
    f[f.S[0]]._check(g[g.S[0]])
    total = np.zeros(f.space.atom_count, dtype=np.result_type(f[f.S[0]].data, g[g.S[0]].data))
    for s in f.S:
        total = total + np.einsum("nd,nd->n", f[s].data, g[s].data)
    return LScalar._wrap(total, f.field, f.space)


class SlotFunctional:
    """A functional on l^p(S, Y) given by one coefficient row per slot."""

    def __init__(self, rows):
        self.rows = dict(rows)
        if not self.rows:
            raise ValueError("need at least one slot")

    @property
    def S(self):
        return tuple(self.rows)

    def __call__(self, f):
        if tuple(f.S) != self.S:
            raise ShapeError("index sets differ")
        total = None
        for s in f.S:
            v = self.rows[s](f[s])
            total = v if total is None else total + v
        return total

    def as_row(self):
        """All slots flattened into a single ``1 x (|S| d)`` matrix."""
        return LMatrix(np.concatenate([self.rows[s].data for s in self.S], axis=2),
                       field=self.rows[self.S[0]].field, space=self.rows[self.S[0]].space)

    def allclose(self, other, rtol=1e-9, atol=1e-12):
        return self.S == other.S and all(self.rows[s].allclose(other.rows[s], rtol, atol) for s in self.S)


def functional_from_dual(g):
    """``g -> phi_g`` with ``phi_g(f) = B(f, g)``."""
    return SlotFunctional({s: LMatrix._wrap(g[s].data[:, None, :].copy(), g.field, g.space)
                           for s in g.S})


def dual_from_functional(phi, p, value_norm=L2, space=None, dim=None, field=None):
    """``phi -> g_phi`` with ``g_phi(s)_k = phi(e_s (x) e_k)``.

    ``p`` and ``value_norm`` describe the space ``phi`` acts on; the result
    lives in the conjugate space.
    """
    first = phi.rows[phi.S[0]]
    space = space or first.space
    dim = dim or first.cols
    field = field or first.field
    p = parse_p(p)
    out = {}
    for s in phi.S:
        coords = []
        for k in range(dim):
            e = elementary(phi.S, s, LVector.basis(space, dim, k, field), p, value_norm)
            coords.append(phi(e))
        out[s] = LVector.from_entries(coords, field=field)
    return LpElement(phi.S, conjugate_exponent(p), out, dual_value_norm(value_norm))


def functional_norm(phi, p, value_norm=L2):
    """Operator norm of ``phi`` on l^p(S, Y).

    Exact when the slot norm is the same p-norm with ``p`` in {1, 2, inf}
    (then l^p(S, Y) is a flat p-norm).  Otherwise returns ``(lower, upper)``
    from sampling and Hölder.
    """
    from .operators import operator_norm

    p = parse_p(p)
    flat = value_norm.kind == "p" and value_norm.p == p
    if flat and p in (1.0, 2.0, INF):
        return operator_norm(phi.as_row(), p, p)
    return functional_norm_bounds(phi, p, value_norm)


def functional_norm_bounds(phi, p, value_norm=L2, samples=256, rng=None):
    rng = np.random.default_rng(0) if rng is None else rng
    g = dual_from_functional(phi, p, value_norm)
    upper = lp_norm(g)
    first = phi.rows[phi.S[0]]
    best = np.zeros(first.space.atom_count)
    for _ in range(samples):
        vals = {}
        for s in phi.S:
            data = rng.standard_normal((first.space.atom_count, first.cols))
            if first.field != REAL:
                data = data + 1j * rng.standard_normal(data.shape)
            vals[s] = LVector(data, field=first.field, space=first.space)
        f = LpElement(phi.S, p, vals, value_norm)
        ratio = modulus(phi(f)).values / lp_norm(f).values
        best = np.maximum(best, ratio)
    return LScalar._wrap(best, REAL, first.space), upper
