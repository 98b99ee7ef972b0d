"""Inner products over the scalar algebra, projections, Riesz representation.

Inner products are given by Gram matrices, one Hermitian positive
definite matrix per atom, with the convention ``<x, y> = y^H G x``
(linear in the first argument).
"""

from dataclasses import dataclass

import numpy as np

from ._config import SVD_RCOND
from .errors import FieldError, ParallelogramViolation, ShapeError
from .scalar import COMPLEX, REAL, Idempotent, LScalar, local_solve, pseudo_inverse, support
from .vectors import LMatrix, LVector


class GramForm:
    """A Gram matrix defining an inner product (or, if ``definite`` is
    false, a semi-inner product)."""

    def __init__(self, G, definite=True):
        if G.rows != G.cols:
            raise ShapeError("Gram matrix must be square")
        g = G.data
        if not np.allclose(g, np.conj(np.swapaxes(g, 1, 2)), rtol=0, atol=1e-12):
            raise ValueError("Gram matrix is not Hermitian on every atom")
        herm = (g + np.conj(np.swapaxes(g, 1, 2))) / 2
        self.min_eig = np.linalg.eigvalsh(herm)[:, 0]
        floor = 1e-10 if definite else -1e-12
        if np.any(self.min_eig <= floor):
            raise ValueError(f"Gram matrix smallest eigenvalue {self.min_eig.min():.3g} not above {floor}")
        self.G = LMatrix._wrap(herm, G.field, G.space)
        self.definite = definite

    @classmethod
    def identity(cls, space, d, field=REAL):
        return cls(LMatrix.identity(space, d, field))

    @property
    def dim(self):
        return self.G.rows

    @property
    def space(self):
        return self.G.space

    def whitening(self):
        """``(W, W_inv)`` with ``W = L^H`` for ``G = L L^H``, so ``<x, y> = (W y)^H (W x)``."""
        if not self.definite:
            raise ValueError("whitening needs a definite Gram matrix")
        L = np.linalg.cholesky(self.G.data)
        W = np.conj(np.swapaxes(L, 1, 2))
        return W, np.linalg.inv(W)


def as_gram(G, x=None):
    if G is None:
        return GramForm.identity(x.space, x.dim, x.field)
    if isinstance(G, GramForm):
        return G
    return GramForm(G)


def _check(x, y, G):
    x._check(y)
    G.space.check(x.space)
    if G.dim != x.dim:
        raise ShapeError(f"Gram matrix of size {G.dim} used on dimension {x.dim}")


def inner(x, y, G=None):
    """``<x, y> = y^H G x``."""
    G = as_gram(G, x)
    _check(x, y, G)
    val = np.einsum("ni,nij,nj->n", np.conj(y.data), G.G.data, x.data)
    field = COMPLEX if COMPLEX in (x.field, G.G.field) else REAL
    return LScalar._wrap(val, field, x.space)


def gram_norm(x, G=None):
    G = as_gram(G, x)
    val = np.einsum("ni,nij,nj->n", np.conj(x.data), G.G.data, x.data)
    return LScalar._wrap(np.sqrt(np.maximum(np.real(val), 0.0)), REAL, x.space)


def cauchy_schwarz_gap(x, y, G=None):
    """``||x|| ||y|| - |<x, y>|``; never below zero."""
    return gram_norm(x, G) * gram_norm(y, G) - abs(inner(x, y, G))


def parallelogram_defect(normfn, x, y):
    """``||x+y||^2 + ||x-y||^2 - 2||x||^2 - 2||y||^2`` per atom."""
    sq = lambda v: normfn(v).values ** 2  # noqa: E731
    return sq(x + y) + sq(x - y) - 2 * sq(x) - 2 * sq(y)


def _probe_pairs(x, y):
    pairs = [(x, y), (x, x), (y, y)]
    for i in range(x.dim):
        ei = LVector.basis(x.space, x.dim, i, x.field)
        for j in range(i + 1, x.dim):
            ej = LVector.basis(x.space, x.dim, j, x.field)
            pairs.append((ei, ej))
            if x.field == COMPLEX:
                pairs.append((ei, ej.scale(1j)))
        pairs.append((ei, x))
    return pairs


def check_parallelogram(normfn, x, y, rtol=1e-9):
    for a, b in _probe_pairs(x, y):
        defect = np.abs(parallelogram_defect(normfn, a, b))
        scale = normfn(a).values ** 2 + normfn(b).values ** 2
        if np.any(defect > rtol * (1.0 + scale)):
            raise ParallelogramViolation(a, b, float(defect.max()))


def polarize(normfn, x, y, check=True):
    """Recover ``<x, y>`` from a norm satisfying the parallelogram law."""
    x._check(y)
    if check:
        check_parallelogram(normfn, x, y)
    sq = lambda v: normfn(v).values ** 2  # noqa: E731
    val = 0.25 * (sq(x + y) - sq(x - y))
    if x.field == COMPLEX:
        iy = y.scale(1j)
        val = val + 0.25j * (sq(x + iy) - sq(x - iy))
    return LScalar._wrap(np.asarray(val), x.field, x.space)


def recover_gram(normfn, space, d, field=REAL):
    """The Gram matrix whose inner product induces ``normfn``."""
    basis = [LVector.basis(space, d, k, field) for k in range(d)]
    check_parallelogram(normfn, basis[0], basis[-1])
    G = np.zeros((space.atom_count, d, d), dtype=np.complex128 if field == COMPLEX else np.float64)
    for i in range(d):
        for j in range(d):
            # G_ij = <e_j, e_i>
            G[:, i, j] = polarize(normfn, basis[j], basis[i], check=False).values
    return LMatrix(G, field=field, space=space)


# -- projections ---------------------------------------------------------

def _generator_array(x, M):
    M = list(M)
    for g in M:
        x._check(g)
    if not M:
        return np.zeros((x.n, x.dim, 0), dtype=x.data.dtype)
    return np.stack([g.data for g in M], axis=2)


@dataclass(frozen=True, eq=False)
class OrthDecomposition:
    """``H = M (+) M^perp`` on every atom.

    ``basis`` holds a G-orthonormal basis as columns; on atom ``w`` the
    first ``rank[w]`` columns span ``M`` and the rest span ``M^perp``.
    """

    basis: LMatrix
    rank: np.ndarray
    projector: LMatrix

    @property
    def complement_projector(self):
        eye = LMatrix.identity(self.basis.space, self.basis.rows, self.projector.field)
        return eye - self.projector

    def _cols(self, inside):
        n, d, _ = self.basis.data.shape
        out = []
        width = int(self.rank.max()) if inside else int((d - self.rank).max())
        for j in range(width):
            col = np.zeros((n, d), dtype=self.basis.data.dtype)
            for w in range(n):
                idx = j if inside else self.rank[w] + j
                if (inside and j < self.rank[w]) or (not inside and idx < d):
                    col[w] = self.basis.data[w, :, idx]
            out.append(LVector._wrap(col, self.basis.field, self.basis.space))
        return out

    def m_generators(self):
        return self._cols(True)

    def perp_generators(self):
        return self._cols(False)


def orth_decompose(M, G=None, x_template=None):
    """Orthogonal decomposition relative to the span of the generators ``M``."""
    M = list(M)
    template = x_template if x_template is not None else M[0]
    G = as_gram(G, template)
    n, d = template.n, template.dim
    W, W_inv = G.whitening()
    A = _generator_array(template, M)
    dtype = np.result_type(A, W)
    if A.shape[2] == 0:
        U = np.broadcast_to(np.eye(d, dtype=dtype), (n, d, d)).copy()
        rank = np.zeros(n, dtype=int)
    else:
        At = W @ A
        U, s, _ = np.linalg.svd(At, full_matrices=True)
        top = s[:, :1]
        rank = np.sum(s > SVD_RCOND * np.where(top > 0, top, np.inf), axis=1)
    mask = np.arange(d)[None, :] < rank[:, None]
    Ur = U * mask[:, None, :]
    P = W_inv @ Ur @ np.conj(np.swapaxes(Ur, 1, 2)) @ W
    field = COMPLEX if np.iscomplexobj(P) else REAL
    basis = LMatrix._wrap(W_inv @ U, field, template.space)
    return OrthDecomposition(basis, rank, LMatrix._wrap(P, field, template.space))


def project_submodule(x, M, G=None):
    """Nearest point ``Px`` of ``span M`` to ``x``; returns ``(Px, x - Px)``."""
    dec = orth_decompose(M, G, x_template=x)
    P = dec.projector.data
    px = np.einsum("nij,nj->ni", P, x.data)
    Px = LVector._wrap(px.astype(np.result_type(x.data, P)), x.field, x.space)
    return Px, x - Px


def project_box(x, a, b):
    """Clamp ``x`` into the order interval ``[a, b]`` (Euclidean norm)."""
    x._check(a)
    x._check(b)
    if x.field != REAL:
        raise FieldError("order intervals need a real module")
    if np.any(a.data > b.data):
        raise ValueError("box lower bound exceeds upper bound")
    return LVector._wrap(np.clip(x.data, a.data, b.data), REAL, x.space)


def realize_support(M, G=None, x_template=None):
    """A normalised ``z`` in ``span M`` whose norm is the support of ``M``.

    On each atom the candidate basis vector with the largest leading
    coordinate is chosen and rotated so its first non-zero coordinate is
    positive.
    """
    dec = orth_decompose(M, G, x_template)
    U = dec.basis.data
    n, d, _ = U.shape
    z = np.zeros((n, d), dtype=U.dtype)
    for w in range(n):
        r = dec.rank[w]
        if r == 0:
            continue
        cands = U[w, :, :r]
        j = int(np.argmax(np.abs(cands[0])))
        v = cands[:, j]
        lead = np.flatnonzero(np.abs(v) > 1e-14)[0]
        z[w] = v * (np.abs(v[lead]) / v[lead])
    return LVector._wrap(z, dec.basis.field, dec.basis.space)


def span_support(M):
    """``pi_M``: the join of the supports of the generators."""
    bits = np.zeros(M[0].n, dtype=bool)
    for g in M:
        bits |= np.any(g.data != 0, axis=1)
    return Idempotent(bits, M[0].space)


# -- Riesz representation --------------------------------------------------

def riesz_direct(phi, G=None):
    """The vector ``f`` with ``phi(h) = <h, f>``: solves ``G f = conj(a)``."""
    if phi.rows != 1:
        raise ShapeError("phi must be a single row")
    a = phi.row(0)
    G = as_gram(G, a)
    f = np.linalg.solve(G.G.data, np.conj(a.data)[..., None])[..., 0]
    field = COMPLEX if COMPLEX in (phi.field, G.G.field) else REAL
    return LVector._wrap(f, field, phi.space)


def _kernel_generators(phi):
    a = phi.data[:, 0, :]
    n, d = a.shape
    _, s, Vh = np.linalg.svd(a[:, None, :], full_matrices=True)
    rank = (s[:, 0] > 0).astype(int)
    V = np.conj(np.swapaxes(Vh, 1, 2))
    gens = []
    for j in range(d):
        col = V[:, :, j] * (j >= rank)[:, None]
        gens.append(LVector._wrap(col, phi.field, phi.space))
    return gens


def _in_field(s, field):
    return LScalar._wrap(s.values, field, s.space)


class RieszCheckFailed(ArithmeticError):
    pass


def riesz_constructive(phi, G=None, trace=False, tol=1e-8):
    """Representing vector built along the kernel-complement route.

    Restrict ``phi`` to ``(ker phi)^perp``, realise the support there by a
    normalised ``z``, check that ``z`` spans the restricted module (so
    ``{z}^perp = 0`` inside it) and return ``conj(phi(z)) z``.
    """
    if phi.rows != 1:
        raise ShapeError("phi must be a single row")
    a = phi.row(0)
    G = as_gram(G, a)
    kernel = _kernel_generators(phi)
    dec = orth_decompose(kernel, G, x_template=a)
    restricted = dec.perp_generators()
    if not restricted:
        restricted = [LVector.zeros(a.space, a.dim, a.field)]
    z = realize_support(restricted, G, x_template=a)
    pi_z = support(gram_norm(z, G))
    phiz = phi(z)

    # the restricted module is spanned by z: w = <w, z> z
    for w in restricted:
        resid = w - z.scale(_in_field(inner(w, z, G), w.field))
        if np.abs(resid.data).max() > tol:
            raise RieszCheckFailed("z does not span the complement of the kernel")
    # phi is injective on the restricted module: phi(z) lives exactly on pi_z
    kappa, pi = pseudo_inverse(phiz)
    if not pi == pi_z:
        raise RieszCheckFailed("phi(z) does not have the support of z")
    for w in restricted:
        lam = local_solve(phiz, phi(w), pi)
        if np.abs((z.scale(lam) - w.scale(pi)).data).max() > tol:
            raise RieszCheckFailed("local solve does not reproduce w")

    f = z.scale(_in_field(phiz.conj(), z.field))
    if trace:
        return f, {"z": z, "phi_z": phiz, "kappa": kappa, "pi": pi, "decomposition": dec}
    return f


# -- adjoints --------------------------------------------------------------

def adjoint(T, G_in=None, G_out=None):
    """``T*`` with ``<T x, y>_out = <x, T* y>_in``: ``G_in^{-1} T^H G_out``."""
    Gi = G_in if isinstance(G_in, GramForm) else (
        GramForm(G_in) if G_in is not None else GramForm.identity(T.space, T.cols, T.field))
    Go = G_out if isinstance(G_out, GramForm) else (
        GramForm(G_out) if G_out is not None else GramForm.identity(T.space, T.rows, T.field))
    if Gi.dim != T.cols or Go.dim != T.rows:
        raise ShapeError("Gram matrices do not match the operator shape")
    TH = np.conj(np.swapaxes(T.data, 1, 2))
    S = np.linalg.solve(Gi.G.data, TH @ Go.G.data)
    field = COMPLEX if COMPLEX in (T.field, Gi.G.field, Go.G.field) else REAL
    return LMatrix._wrap(S, field, T.space)


def gram_operator_norm(T, G_in=None, G_out=None):
    """Operator norm of ``T`` between the Gram-normed modules."""
    Gi = G_in if isinstance(G_in, GramForm) else (
        GramForm(G_in) if G_in is not None else GramForm.identity(T.space, T.cols, T.field))
    Go = G_out if isinstance(G_out, GramForm) else (
        GramForm(G_out) if G_out is not None else GramForm.identity(T.space, T.rows, T.field))
    _, Wi_inv = Gi.whitening()
    Wo, _ = Go.whitening()
    s = np.linalg.svd(Wo @ T.data @ Wi_inv, compute_uv=False)
    return LScalar._wrap(s[:, 0], REAL, T.space)
