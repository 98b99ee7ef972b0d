"""Sublinear functionals and constructive Hahn-Banach extension.

A sublinear map here is ``sigma(x) = max_i Re psi_i(x) + mu ||x||_p``.
After substituting a point of the subspace, both ends of the admissible
interval for the new value are small linear programs on every atom,
solved exactly by the dense simplex kernel.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from ._config import SVD_RCOND
from ._kernels import OPTIMAL, UNBOUNDED, STATUS_NAMES, lp_batch
from .errors import FieldError, LPFailure, ShapeError, Undominated
from .normed import INF, NormSpec, norm, parse_p
from .scalar import COMPLEX, REAL, Idempotent, LScalar, normalise_scalar
from .vectors import LMatrix, LVector, functional

RHO_RULES = ("midpoint", "lower", "upper")


@dataclass(frozen=True, eq=False)
class SublinearSpec:
    """``x -> max_i Re psi_i(x) + mu ||x||_p``.

    ``psis`` are one-row ``LMatrix`` functionals; the norm term is optional.
    Exact extension intervals need ``norm_p`` in {1, inf}; ``p = 2`` is
    accepted for evaluation only.
    """

    psis: tuple = ()
    norm_mu: LScalar = None
    norm_p: float = 1.0

    def __post_init__(self):
        psis = tuple(self.psis)
        object.__setattr__(self, "psis", psis)
        object.__setattr__(self, "norm_p", parse_p(self.norm_p))
        if not psis and self.norm_mu is None:
            raise ValueError("a sublinear map needs functionals or a norm term")
        for psi in psis:
            if psi.rows != 1:
                raise ShapeError("psi functionals must be single rows")
            psis[0].space.check(psi.space)
            if psi.cols != psis[0].cols:
                raise ShapeError("psi functionals disagree on dimension")
        if self.norm_mu is not None:
            if self.norm_mu.field != REAL or np.any(self.norm_mu.values < 0):
                raise ValueError("norm weight must be a positive real scalar")
            if psis:
                psis[0].space.check(self.norm_mu.space)

    @property
    def space(self):
        return self.psis[0].space if self.psis else self.norm_mu.space

    @property
    def dim(self):
        return self.psis[0].cols if self.psis else None

    @classmethod
    def norm_only(cls, mu, p=1.0):
        return cls((), mu, p)


def sublinear_eval(sigma, x):
    sigma.space.check(x.space)
    n = x.n
    out = np.zeros(n)
    if sigma.psis:
        if x.dim != sigma.dim:
            raise ShapeError(f"sublinear map on dimension {sigma.dim} applied to {x.dim}")
        vals = np.stack([np.real(np.einsum("nd,nd->n", psi.data[:, 0, :], x.data))
                         for psi in sigma.psis])
        out = vals.max(axis=0)
    if sigma.norm_mu is not None:
        out = out + sigma.norm_mu.values * norm(x, NormSpec("p", sigma.norm_p)).values
    return LScalar._wrap(out, REAL, x.space)


@dataclass(frozen=True, eq=False)
class ExtensionState:
    """A functional on ``span(domain_basis)`` dominated by ``sigma``.

    The functional is stored as a coefficient row ``coeffs`` on the whole
    module; only its values on the domain matter.
    """

    domain_basis: tuple
    coeffs: LVector
    sigma: SublinearSpec
    rho_rule: str = "midpoint"
    _meta: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "domain_basis", tuple(self.domain_basis))
        if self.rho_rule not in RHO_RULES:
            raise ValueError(f"rho_rule must be one of {RHO_RULES}")
        if self.coeffs.field != REAL:
            raise FieldError("real Hahn-Banach extension needs a real module")
        for b in self.domain_basis:
            self.coeffs._check(b)

    @classmethod
    def from_values(cls, basis, values, sigma, rho_rule="midpoint"):
        """Functional on ``span(basis)`` given by its values on the basis."""
        basis = list(basis)
        if len(basis) != len(values):
            raise ShapeError("need one value per basis vector")
        B = np.stack([b.data for b in basis], axis=2)
        v = np.stack([val.values for val in values], axis=1)
        # least-norm f with B^T f = v on every atom
        f = np.einsum("ndk,nk->nd", np.linalg.pinv(np.swapaxes(B, 1, 2), rcond=SVD_RCOND), v)
        resid = np.abs(np.einsum("ndk,nd->nk", B, f) - v)
        if np.any(resid > 1e-9 * (1 + np.abs(v))):
            raise ValueError("values are not consistent with a linear functional on the span")
        return cls(basis, LVector(f, field=REAL, space=basis[0].space), sigma, rho_rule)

    @classmethod
    def trivial(cls, space, dim, sigma, rho_rule="midpoint"):
        """The zero functional on the zero subspace."""
        return cls((), LVector.zeros(space, dim), sigma, rho_rule)

    @property
    def space(self):
        return self.coeffs.space

    @property
    def dim(self):
        return self.coeffs.dim

    def phi(self, y):
        return functional(self.coeffs)(y)

    def functional(self):
        return functional(self.coeffs)

    def basis_array(self):
        if not self.domain_basis:
            return np.zeros((self.space.atom_count, self.dim, 0))
        return np.stack([b.data for b in self.domain_basis], axis=2)

    def orthonormal_basis(self):
        """Per-atom orthonormal basis of the domain, padded with zero columns.

        The extension LPs are posed in these coordinates; a nearly dependent
        ``domain_basis`` would otherwise make them badly conditioned.
        """
        B = self.basis_array()
        if B.shape[2] == 0:
            return B
        U, s, _ = np.linalg.svd(B, full_matrices=False)
        top = s[:, :1]
        keep = s > SVD_RCOND * np.where(top > 0, top, np.inf)
        return U * keep[:, None, :]


def _span_residual(B, z):
    if B.shape[2] == 0:
        return z.copy()
    P = B @ np.linalg.pinv(B, rcond=SVD_RCOND)
    return z - np.einsum("nij,nj->ni", P, z)


def in_span_atoms(state, z):
    """Atoms on which ``z`` lies in the domain of ``state``."""
    r = _span_residual(state.basis_array(), z.data)
    scale = 1.0 + np.abs(z.data).max(axis=1)
    return Idempotent(np.abs(r).max(axis=1) <= 1e-10 * scale, z.space)


def _build_lps(sigma, B, v, z, box=None):
    """LP data for ``inf_c sigma(B c + z) - v.c`` on every atom."""
    n, d, k = B.shape
    psis = (np.stack([psi.data[:, 0, :] for psi in sigma.psis], axis=1)
            if sigma.psis else np.zeros((n, 0, d)))
    m = psis.shape[1]
    has_norm = sigma.norm_mu is not None
    p = sigma.norm_p
    if has_norm and p not in (1.0, INF):
        raise ValueError("exact extension intervals need a norm term with p in {1, inf}")
    mu = sigma.norm_mu.values if has_norm else np.zeros(n)

    n_t = 2 if m else 0
    n_s = 1 if (has_norm and p == INF) else 0
    n_u = d if (has_norm and p == 1) else 0
    nv = 2 * k + n_t + n_s + n_u
    rows = m + (2 * d if has_norm else 0) + (2 * k if box is not None else 0)
    C = np.zeros((n, nv))
    A = np.zeros((n, rows, nv))
    b = np.zeros((n, rows))

    C[:, :k] = -v
    C[:, k:2 * k] = v
    it = 2 * k
    if m:
        C[:, it] = 1.0
        C[:, it + 1] = -1.0
    is_ = 2 * k + n_t
    iu = is_ + n_s
    if n_s:
        C[:, is_] = mu
    if n_u:
        C[:, iu:iu + d] = mu[:, None]

    r = 0
    if m:
        PB = np.einsum("nmd,ndk->nmk", psis, B)
        A[:, r:r + m, :k] = PB
        A[:, r:r + m, k:2 * k] = -PB
        A[:, r:r + m, it] = -1.0
        A[:, r:r + m, it + 1] = 1.0
        b[:, r:r + m] = -np.einsum("nmd,nd->nm", psis, z)
        r += m
    if has_norm:
        for sign in (1.0, -1.0):
            A[:, r:r + d, :k] = sign * B
            A[:, r:r + d, k:2 * k] = -sign * B
            if n_s:
                A[:, r:r + d, is_] = -1.0
            else:
                A[:, r:r + d, iu:iu + d] = -np.eye(d)
            b[:, r:r + d] = -sign * z
            r += d
    if box is not None:
        A[:, r:r + 2 * k, :2 * k] = np.eye(2 * k)
        b[:, r:r + 2 * k] = box
        r += 2 * k
    return C, A, b


def _solve(C, A, b):
    n = C.shape[0]
    if C.shape[1] == 0:
        return np.zeros(n, dtype=np.int64), np.zeros((n, 0)), np.zeros(n)
    scale = max(1.0, float(np.abs(C).max()), float(np.abs(A).max()))
    return lp_batch(C, A, b, tol=1e-11 * scale)


def check_domination(state, atol=1e-9):
    """Raise ``Undominated`` unless ``phi <= sigma`` on the domain."""
    B = state.orthonormal_basis()
    k = B.shape[2]
    if k == 0:
        return
    n = state.space.atom_count
    v = np.einsum("ndk,nd->nk", B, state.coeffs.data)
    C, A, b = _build_lps(state.sigma, B, v, np.zeros((n, state.dim)), box=1.0)
    status, X, obj = _solve(C, A, b)
    if np.any(status != OPTIMAL):
        raise LPFailure(STATUS_NAMES[int(status[status != OPTIMAL][0])], np.flatnonzero(status != OPTIMAL))
    scale = 1.0 + np.abs(C).max(axis=1)
    bad = obj < -atol * scale
    if np.any(bad):
        c = X[:, :k] - X[:, k:2 * k]
        witness = LVector(np.einsum("ndk,nk->nd", B, c) * bad[:, None], field=REAL, space=state.space)
        raise Undominated(witness, np.flatnonzero(bad))


def _xi(state, z, free):
    # only atoms in ``free`` matter; the others get their forced value
    B = state.orthonormal_basis()
    v = np.einsum("ndk,nd->nk", B, state.coeffs.data) if B.shape[2] else np.zeros((B.shape[0], 0))
    C, A, b = _build_lps(state.sigma, B, v, z)
    status, _, obj = _solve(C, A, b)
    bad = (status != OPTIMAL) & free
    if np.any(bad & (status == UNBOUNDED)):
        check_domination(state)
        raise LPFailure("unbounded", np.flatnonzero(bad & (status == UNBOUNDED)))
    if np.any(bad):
        raise LPFailure(STATUS_NAMES[int(status[bad][0])], np.flatnonzero(bad))
    return obj


def _require_extendable(state, z):
    if z.field != REAL:
        raise FieldError("real Hahn-Banach extension needs a real module")
    state.coeffs._check(z)
    if state.sigma.dim is not None and state.sigma.dim != z.dim:
        raise ShapeError("sublinear map and module disagree on dimension")
    forced = in_span_atoms(state, z)
    if forced == Idempotent.one(z.space):
        raise ValueError("z already lies in the domain on every atom")
    return forced


def hb_interval(state, z):
    """The admissible interval ``[eta, xi]`` for the value at ``z``.

    ``xi = inf_{x in Y} sigma(x + z) - phi(x)`` and
    ``eta = sup_{y in Y} -sigma(-z - y) - phi(y)``; on atoms where ``z``
    is already in the domain both equal the forced value ``phi(z)``.
    """
    forced = _require_extendable(state, z)
    check_domination(state)
    free = ~forced.bits
    xi = _xi(state, z.data, free)
    eta = -_xi(state, -z.data, free)
    fz = state.phi(z).values
    xi = np.where(forced.bits, fz, xi)
    eta = np.where(forced.bits, fz, eta)
    return LScalar._wrap(eta, REAL, z.space), LScalar._wrap(xi, REAL, z.space)


def choose_rho(eta, xi, rule):
    if rule == "midpoint":
        return (eta + xi) * 0.5
    if rule == "lower":
        return eta
    if rule == "upper":
        return xi
    raise ValueError(f"unknown rho rule {rule!r}")


def hb_extend_step(state, z, rho_rule=None):
    """Extend the functional to ``Y + L z`` with value ``rho`` at ``z``.

    The new value is chosen for the unit residual ``u`` of ``z`` off ``Y``
    rather than for ``z`` itself.  Both span the same extension and
    ``rho = phi(z - |r| u) + |r| Phi(u)`` maps one interval affinely onto
    the other, so every rule picks the same point; working with ``u``
    keeps rounding in the LP from being amplified by ``1/|r|`` when ``z``
    is nearly in ``Y``.
    """
    rule = rho_rule or state.rho_rule
    forced = _require_extendable(state, z).bits
    check_domination(state)
    free = ~forced
    r = _span_residual(state.basis_array(), z.data)
    nr = np.sqrt(np.einsum("nd,nd->n", r, r))
    u = np.zeros_like(r)
    u[free] = r[free] / nr[free, None]
    xi_u = _xi(state, u, free)
    eta_u = -_xi(state, -u, free)
    rho_u = choose_rho(eta_u, xi_u, rule)
    f = state.coeffs.data
    shift = np.where(free, rho_u - np.einsum("nd,nd->n", f, u), 0.0)
    coeffs = f + shift[:, None] * u
    # report the interval and choice in terms of z
    base = np.einsum("nd,nd->n", f, z.data - r)
    fz = np.einsum("nd,nd->n", f, z.data)
    to_z = lambda t: LScalar._wrap(np.where(free, base + nr * t, fz), REAL, z.space)  # noqa: E731
    new = ExtensionState(state.domain_basis + (z,), LVector(coeffs, field=REAL, space=z.space),
                         state.sigma, state.rho_rule)
    new._meta.update(eta=to_z(eta_u), xi=to_z(xi_u), rho=to_z(rho_u))
    return new


def hb_extend_full(state, rho_rule=None):
    """Extend to the whole module by adjoining standard basis vectors in order.

    Returns the final ``ExtensionState``; its ``functional()`` is the
    dominated extension.
    """
    for k in range(state.dim):
        e = LVector.basis(state.space, state.dim, k)
        if in_span_atoms(state, e) == Idempotent.one(state.space):
            continue
        state = hb_extend_step(state, e, rho_rule)
    return state


# -- complex scalars ----------------------------------------------------------

def realify(x):
    """The real vector ``(Re x, Im x)`` of twice the dimension."""
    return LVector(np.concatenate([np.real(x.data), np.imag(x.data)], axis=1), field=REAL, space=x.space)


def real_part_functional(phi):
    """``Re phi`` as a real functional on the realification."""
    a = phi.data[:, 0, :]
    return LMatrix(np.concatenate([np.real(a), -np.imag(a)], axis=1)[:, None, :], field=REAL,
                   space=phi.space)


def complexify(psi):
    """``Phi(x) = Psi(x) - i Psi(i x)`` for a real functional ``Psi`` on the realification."""
    if psi.rows != 1 or psi.cols % 2:
        raise ShapeError("expected a single row acting on the realification")
    d = psi.cols // 2
    a = np.real(psi.data[:, 0, :d])
    b = np.real(psi.data[:, 0, d:])
    return LMatrix((a - 1j * b)[:, None, :], field=COMPLEX, space=psi.space)


def norming_functional(x, p=2.0):
    """A functional ``x*`` with ``x*(x) = ||x||_p`` and ``||x*|| = pi_x``."""
    p = parse_p(p)
    n, d = x.data.shape
    phase = np.zeros_like(x.data)
    for k in range(d):
        phase[:, k] = normalise_scalar(x[k].conj()).values
    mod = np.abs(x.data)
    if p == 1:
        coeffs = phase
    elif p == 2:
        nx = norm(x).values
        scale = np.where(nx > 0, 1.0 / np.where(nx > 0, nx, 1.0), 0.0)
        coeffs = np.conj(x.data) * scale[:, None]
    elif p == INF:
        top = mod.argmax(axis=1)
        coeffs = np.zeros_like(x.data)
        coeffs[np.arange(n), top] = phase[np.arange(n), top]
    else:
        raise ValueError("norming functionals are provided for p in {1, 2, inf}")
    return LMatrix(coeffs[:, None, :], field=x.field, space=x.space)


def domination_slack(coeffs, sigma, samples, complex_modulus=False):
    """``min`` over samples of ``sigma(y) - Phi(y)`` (or ``- |Phi(y)|``), per atom."""
    phi = functional(coeffs) if isinstance(coeffs, LVector) else coeffs
    worst = None
    for y in samples:
        val = phi(y)
        lhs = np.abs(val.values) if complex_modulus else np.real(val.values)
        gap = sublinear_eval(sigma, y).values - lhs
        worst = gap if worst is None else np.minimum(worst, gap)
    return LScalar._wrap(worst, REAL, sigma.space)
