"""Lattice-valued norms on free modules and the operations built on them."""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from ._config import ORDER_SLACK, SVD_RCOND
from .errors import ShapeError
from .scalar import REAL, Idempotent, LScalar, inf2, sup_family
from .vectors import LMatrix, LVector

INF = float("inf")


def parse_p(p):
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity"):
            return INF
        p = float(p)
    p = float(p)
    if not p >= 1:
        raise ValueError(f"p must lie in [1, inf], got {p}")
    return p


def conjugate_exponent(p):
    p = parse_p(p)
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True, eq=False)
class NormSpec:
    """Which norm to put on a free module.

    ``kind`` is ``"p"`` (uses ``p``), ``"gram"`` (``sqrt(x^H G x)``) or
    ``"weighted"`` (the p-norm of ``(w_k x_k)_k``; weights invertible).
    """

    kind: str = "p"
    p: float = 2.0
    gram: LMatrix = None
    weights: tuple = None

    def __post_init__(self):
        if self.kind not in ("p", "gram", "weighted"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        object.__setattr__(self, "p", parse_p(self.p))
        if self.kind == "gram":
            if self.gram is None or self.gram.rows != self.gram.cols:
                raise ValueError("gram norm needs a square LMatrix")
            g = self.gram.data
            if not np.allclose(g, np.conj(np.swapaxes(g, 1, 2)), rtol=0, atol=1e-12):
                raise ValueError("gram matrix is not Hermitian on every atom")
            if np.linalg.eigvalsh(g).min() <= 0:
                raise ValueError("gram matrix is not positive definite on every atom")
        if self.kind == "weighted":
            if not self.weights:
                raise ValueError("weighted norm needs weights")
            w = tuple(self.weights)
            for wk in w:
                if wk.field != REAL or np.any(wk.values <= 0):
                    raise ValueError("weights must be strictly positive")
            object.__setattr__(self, "weights", w)

    @classmethod
    def pnorm(cls, p=2.0):
        return cls("p", p)

    def dim(self):
        if self.kind == "gram":
            return self.gram.rows
        if self.kind == "weighted":
            return len(self.weights)
        return None

    def check(self, x):
        d = self.dim()
        if d is not None and d != x.dim:
            raise ShapeError(f"norm for dimension {d} applied to dimension {x.dim}")
        if self.kind == "gram":
            self.gram.space.check(x.space)
        elif self.kind == "weighted":
            x.space.check(self.weights[0].space)


L2 = NormSpec("p", 2.0)


def _pnorm_rows(a, p):
    # a: (n, d) of moduli
    if p == INF:
        return a.max(axis=1)
    if p == 1:
        return a.sum(axis=1)
    if p == 2:
        return np.sqrt(np.einsum("nd,nd->n", a, a))
    return np.power(np.power(a, p).sum(axis=1), 1.0 / p)


def norm(x, spec=L2):
    """Lattice-valued norm of ``x``; a positive real scalar."""
    spec.check(x)
    if spec.kind == "p":
        out = _pnorm_rows(np.abs(x.data), spec.p)
    elif spec.kind == "weighted":
        w = np.stack([wk.values for wk in spec.weights], axis=1)
        out = _pnorm_rows(w * np.abs(x.data), spec.p)
    else:
        q = np.einsum("ni,nij,nj->n", np.conj(x.data), spec.gram.data, x.data)
        out = np.sqrt(np.maximum(q.real, 0.0))
    return LScalar._wrap(out, REAL, x.space)


def vector_support(x):
    """``pi_x``: the atoms on which some coordinate of ``x`` is non-zero."""
    return Idempotent(np.any(x.data != 0, axis=1), x.space)


def vector_normalise(x, spec=L2):
    """Closed form of ``lim x / (||x|| + 1/n)``: ``x / ||x||`` on the support."""
    nx = norm(x, spec).values
    scale = np.zeros_like(nx)
    nz = nx > 0
    scale[nz] = 1.0 / nx[nz]
    return LVector._wrap(x.data * scale[:, None], x.field, x.space)


def normalise_sequence(x, n, spec=L2):
    """The ``n``-th term ``x / (||x|| + 1/n)`` of the normalising sequence."""
    nx = norm(x, spec).values
    return LVector._wrap(x.data / (nx + 1.0 / n)[:, None], x.field, x.space)


def is_normalised(x, spec=L2, atol=1e-12):
    v = norm(x, spec).values
    return bool(np.all(np.minimum(np.abs(v), np.abs(v - 1.0)) <= atol))


def disjoint(x, y):
    x._check(y)
    return (vector_support(x) & vector_support(y)).is_zero()


def lattice_refine(x, y, z, spec=L2):
    """Combine ``y`` and ``z`` atomwise into ``v`` with
    ``||x - v|| = ||x - y|| /\\ ||x - z||``.

    ``v = pi y + pi^c z`` where ``pi`` marks the atoms on which ``y`` is
    strictly closer to ``x``.
    """
    x._check(y)
    x._check(z)
    lam = norm(x - y, spec)
    mu = norm(x - z, spec)
    pi = Idempotent(lam.values < mu.values, x.space)
    return y.scale(pi) + z.scale(~pi)


def pconvex_distance(x, generators, spec=L2):
    """Distance from ``x`` to the P-convex hull of ``generators``.

    Returns ``(dist, argmin)``; the minimum is attained at ``argmin``.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    v = reduce(lambda acc, g: lattice_refine(x, acc, g, spec), generators[1:], generators[0])
    return norm(x - v, spec), v


def _pinv_project(A, x):
    # orthogonal projection of x onto the column span of A, per atom
    Ap = np.linalg.pinv(A, rcond=SVD_RCOND)
    return np.einsum("nij,njk,nk->ni", A, Ap, x)


def quotient_seminorm(x, Y):
    """``inf_{y in span Y} ||x - y||_2``, i.e. the Euclidean quotient seminorm."""
    Y = list(Y)
    if not Y:
        return norm(x)
    for y in Y:
        x._check(y)
    A = np.stack([y.data for y in Y], axis=2)
    r = x.data - _pinv_project(A, x.data)
    return LScalar._wrap(np.sqrt(np.einsum("nd,nd->n", np.conj(r), r).real), REAL, x.space)


def reverse_triangle_gap(x, y, spec=L2):
    """``||x - y|| - | ||x|| - ||y|| |``, which is never negative."""
    return norm(x - y, spec) - abs(norm(x, spec) - norm(y, spec))


def witnessed_limit(terms, witnesses, distance, slack=ORDER_SLACK):
    """Check an order-Cauchy certificate and return the limit approximant.

    ``witnesses`` must decrease, and for every ``k`` all pairs of terms
    from index ``k`` on must lie within ``witnesses[k]`` of each other.
    Returns ``(terms[-1], witnesses[-1])``: the last term and a per-atom
    bound on its distance to the limit.
    """
    terms = list(terms)
    witnesses = list(witnesses)
    if len(terms) != len(witnesses) or not terms:
        raise ValueError("need one witness per term")
    for a, b in zip(witnesses, witnesses[1:]):
        if not b.le(a, slack):
            raise ValueError("witnesses must decrease")
    for k in range(len(terms)):
        for m in range(k, len(terms)):
            if not distance(terms[k], terms[m]).le(witnesses[k], slack):
                raise ValueError(f"tail from index {k} is not within its witness")
    return terms[-1], witnesses[-1]


def tail_bound(terms, distance_to_zero):
    """Per-atom bound on the norms of a finite tail."""
    return sup_family([distance_to_zero(t) for t in terms])


def refine_distances(x, y, z, spec=L2):
    """The pair of distances ``lattice_refine`` chooses between, and their meet."""
    lam = norm(x - y, spec)
    mu = norm(x - z, spec)
    return lam, mu, inf2(lam, mu)
