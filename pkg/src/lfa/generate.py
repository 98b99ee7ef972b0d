"""Seeded random instances.

All randomness comes from numpy's ``PCG64`` bit generator through
``numpy.random.Generator``, so a seed fixes the output on every platform.
"""

import numpy as np

from .hahn_banach import SublinearSpec
from .hilbert import GramForm
from .scalar import COMPLEX, REAL, AtomSpace, Idempotent, LScalar
from .vectors import LMatrix, LVector

GRAM_EPS = 1e-3
KINDS = ("lscalar", "lvector", "lmatrix", "gram", "sublinear")


def rng_for(seed):
    return np.random.Generator(np.random.PCG64(seed))


def _check_params(atoms, dim=1, rows=1):
    for name, v in (("atoms", atoms), ("dim", dim), ("rows", rows)):
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")
    return AtomSpace(int(atoms))


def _draw(rng, shape, field):
    a = rng.standard_normal(shape)
    if field == COMPLEX:
        a = a + 1j * rng.standard_normal(shape)
    elif field != REAL:
        raise ValueError(f"unknown field {field!r}")
    return a


def _sparsify(rng, a, zero_prob):
    if zero_prob:
        keep = rng.random(a.shape) >= zero_prob
        a = a * keep
    return a


def lscalar(rng, atoms, field=REAL, zero_prob=0.0, positive=False):
    space = _check_params(atoms)
    a = _draw(rng, atoms, REAL if positive else field)
    if positive:
        a = np.abs(a)
    return LScalar(_sparsify(rng, a, zero_prob), field=REAL if positive else field, space=space)


def idempotent(rng, atoms, prob=0.5):
    space = _check_params(atoms)
    return Idempotent(rng.random(atoms) < prob, space)


def lvector(rng, atoms, dim, field=REAL, zero_prob=0.0):
    space = _check_params(atoms, dim)
    return LVector(_sparsify(rng, _draw(rng, (atoms, dim), field), zero_prob), field=field, space=space)


def lmatrix(rng, atoms, rows, cols, field=REAL):
    space = _check_params(atoms, rows, cols)
    return LMatrix(_draw(rng, (atoms, rows, cols), field), field=field, space=space)


def gram(rng, atoms, dim, field=REAL, eps=GRAM_EPS):
    """``A^H A + eps I`` per atom: Hermitian positive definite."""
    A = lmatrix(rng, atoms, dim, dim, field).data
    G = np.conj(np.swapaxes(A, 1, 2)) @ A + eps * np.eye(dim)
    return GramForm(LMatrix(G, field=field, space=AtomSpace(atoms)))


def sublinear(rng, atoms, dim, m=2, norm_p=1.0, with_norm=True):
    """A max of ``m`` random real functionals plus an optional weighted p-norm."""
    space = _check_params(atoms, dim)
    psis = tuple(LMatrix(rng.standard_normal((atoms, 1, dim)), field=REAL, space=space)
                 for _ in range(m))
    mu = None
    if with_norm:
        mu = LScalar(0.5 + rng.random(atoms), field=REAL, space=space)
    if not psis and mu is None:
        raise ValueError("need at least one functional or a norm term")
    return SublinearSpec(psis, mu, norm_p)


def generate(kind, seed=0, atoms=2, dim=3, field=REAL):
    """Entry point used by the command line ``gen`` subcommand."""
    rng = rng_for(seed)
    if kind == "lscalar":
        return lscalar(rng, atoms, field)
    if kind == "lvector":
        return lvector(rng, atoms, dim, field)
    if kind == "lmatrix":
        return lmatrix(rng, atoms, dim, dim, field)
    if kind == "gram":
        return gram(rng, atoms, dim, field)
    if kind == "sublinear":
        if field != REAL:
            raise ValueError("sublinear maps are generated over the real field")
        return sublinear(rng, atoms, dim)
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
