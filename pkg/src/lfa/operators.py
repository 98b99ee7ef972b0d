"""Bounded operators between free modules, their norms, and the bidual map."""

import numpy as np

from .normed import INF, conjugate_exponent, norm, NormSpec, parse_p, _pnorm_rows
from .scalar import REAL, LScalar
from .vectors import LMatrix, LVector, apply, compose, functional

__all__ = ["apply", "compose", "operator_norm", "inverse", "bidual_embed", "Bidual",
           "SUPPORTED_P"]

SUPPORTED_P = (1.0, 2.0, INF)


def _check_p(p):
    p = parse_p(p)
    if p not in SUPPORTED_P:
        raise ValueError(f"operator norms are provided for p in {{1, 2, inf}}, got {p}")
    return p


def operator_norm(T, p_in=2.0, p_out=2.0):
    """Induced norm ``sup_{||x||_p_in <= 1} ||T x||_p_out`` on every atom.

    Closed forms: column sums (1 -> 1), row sums (inf -> inf), top
    singular value (2 -> 2), column norms (1 -> q) and dual row norms
    (p -> inf).  A single-row matrix is a functional and gets the dual
    norm of its row for any ``p_out``.
    """
    p_in, p_out = _check_p(p_in), _check_p(p_out)
    a = np.abs(T.data)
    if T.rows == 1:
        out = _pnorm_rows(a[:, 0, :], conjugate_exponent(p_in))
    elif p_in == 1:
        # max over columns of the p_out norm of the column
        cols = np.swapaxes(a, 1, 2).reshape(-1, T.rows)
        out = _pnorm_rows(cols, p_out).reshape(T.n, T.cols).max(axis=1)
    elif p_out == INF:
        rows = a.reshape(-1, T.cols)
        out = _pnorm_rows(rows, conjugate_exponent(p_in)).reshape(T.n, T.rows).max(axis=1)
    elif p_in == 2 and p_out == 2:
        out = np.linalg.svd(T.data, compute_uv=False)[:, 0]
    else:
        raise ValueError(f"no closed form for the ({p_in}, {p_out}) operator norm")
    return LScalar._wrap(np.asarray(out, dtype=np.float64), REAL, T.space)


def inverse(T):
    """Per-atom matrix inverse; ``numpy.linalg.LinAlgError`` if singular somewhere."""
    if T.rows != T.cols:
        raise ValueError("only square matrices are invertible")
    return LMatrix._wrap(np.linalg.inv(T.data), T.field, T.space)


class Bidual:
    """``J(x)``: evaluation at ``x`` as a functional on the dual module."""

    def __init__(self, x, p):
        self.x = x
        self.p = _check_p(p)

    def __call__(self, g):
        if isinstance(g, LVector):
            g = functional(g)
        return g(self.x)

    def norm(self):
        """Norm of ``J(x)`` on the dual, whose norm is the conjugate exponent."""
        return operator_norm(functional(self.x), conjugate_exponent(self.p), 2.0)


def bidual_embed(x, p=2.0):
    return Bidual(x, p)


def sampled_norm(T, p_in, p_out, samples, rng):
    """Largest ``||T x|| / ||x||`` over random ``x``; a lower bound on the norm."""
    p_in, p_out = parse_p(p_in), parse_p(p_out)
    best = np.zeros(T.n)
    spec_in, spec_out = NormSpec("p", p_in), NormSpec("p", p_out)
    for _ in range(samples):
        data = rng.standard_normal((T.n, T.cols))
        if T.field != REAL:
            data = data + 1j * rng.standard_normal(data.shape)
        x = LVector(data, field=T.field, space=T.space)
        nx = norm(x, spec_in).values
        ratio = np.where(nx > 0, norm(apply(T, x), spec_out).values / np.where(nx > 0, nx, 1), 0)
        best = np.maximum(best, ratio)
    return LScalar._wrap(best, REAL, T.space)
