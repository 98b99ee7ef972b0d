"""Independent single-atom reference implementations.

Every routine here works on plain numbers for one atom and avoids the
numerical kernels used by the library proper: singular values come from
one-sided Jacobi rotations, linear solves from Gaussian elimination,
projections from Gram-Schmidt, and Hahn-Banach intervals from SciPy's
HiGHS dual simplex on a formulation with free variables.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .scalar import COMPLEX, REAL, AtomSpace, Idempotent, LScalar
from .vectors import LMatrix, LVector

SUITE = ("norm_p", "opnorm_p", "hb_interval_lp", "project_ls", "riesz_solve", "svd_top",
         "modulus", "support", "normalise", "freudenthal", "adjoint")


@dataclass(frozen=True)
class AtomSlice:
    kind: str
    value: object
    field: str = REAL


def slice(obj, atom):  # noqa: A001 - mirrors the operation name
    n = obj.space.atom_count
    if not 0 <= atom < n:
        raise IndexError(f"atom {atom} out of range for {n} atoms")
    if isinstance(obj, Idempotent):
        return AtomSlice("idempotent", bool(obj.bits[atom]))
    if isinstance(obj, LScalar):
        return AtomSlice("scalar", obj.values[atom].item(), obj.field)
    if isinstance(obj, LVector):
        return AtomSlice("vector", obj.data[atom].copy(), obj.field)
    if isinstance(obj, LMatrix):
        return AtomSlice("matrix", obj.data[atom].copy(), obj.field)
    raise TypeError(f"cannot slice {type(obj).__name__}")


def assemble(slices):
    slices = list(slices)
    if not slices:
        raise ValueError("nothing to assemble")
    kind = slices[0].kind
    field = COMPLEX if any(s.field == COMPLEX for s in slices) else REAL
    space = AtomSpace(len(slices))
    if kind == "idempotent":
        return Idempotent([s.value for s in slices], space)
    if kind == "scalar":
        return LScalar([s.value for s in slices], field=field, space=space)
    if kind == "vector":
        return LVector(np.stack([s.value for s in slices]), field=field, space=space)
    if kind == "matrix":
        return LMatrix(np.stack([s.value for s in slices]), field=field, space=space)
    raise ValueError(f"unknown slice kind {kind!r}")


def slices(obj):
    return [slice(obj, w) for w in range(obj.space.atom_count)]


# -- textbook kernels --------------------------------------------------------

def norm_p(x, p):
    mods = [abs(complex(v)) for v in x]
    if p == math.inf:
        return max(mods)
    if p == 1:
        return math.fsum(mods)
    return math.fsum(m ** p for m in mods) ** (1.0 / p)


def jacobi_singular_values(A, tol=1e-15, max_sweeps=100):
    """Singular values by one-sided (Hestenes) Jacobi rotations."""
    A = np.asarray(A)
    if np.iscomplexobj(A):
        # realification doubles every singular value's multiplicity
        A = np.block([[A.real, -A.imag], [A.imag, A.real]])
        return jacobi_singular_values(A, tol, max_sweeps)[::2]
    U = [list(map(float, col)) for col in A.T]
    n = len(U)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                up, uq = U[p], U[q]
                alpha = math.fsum(a * a for a in up)
                beta = math.fsum(b * b for b in uq)
                gamma = math.fsum(a * b for a, b in zip(up, uq))
                if gamma == 0 or abs(gamma) <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                U[p] = [c * a - s * b for a, b in zip(up, uq)]
                U[q] = [s * a + c * b for a, b in zip(up, uq)]
        if not rotated:
            break
    return sorted((math.sqrt(math.fsum(a * a for a in col)) for col in U), reverse=True)


def svd_top(A):
    return jacobi_singular_values(A)[0]


def _conj(p):
    return math.inf if p == 1 else (1.0 if p == math.inf else p / (p - 1.0))


def opnorm_p(A, p, p_out=None):
    """Induced norm from l^p to l^p_out (``p_out`` defaults to ``p``)."""
    A = np.asarray(A)
    rows, cols = A.shape
    if p_out is not None and p_out != p:
        if rows == 1:
            return norm_p(A[0], _conj(p))
        if p == 1:
            return max(norm_p(A[:, j], p_out) for j in range(cols))
        if p_out == math.inf:
            return max(norm_p(A[i], _conj(p)) for i in range(rows))
        raise ValueError(f"no classical operator norm for ({p}, {p_out})")
    if rows == 1:
        return norm_p(A[0], _conj(p))
    if p == 1:
        return max(math.fsum(abs(complex(A[i, j])) for i in range(rows)) for j in range(cols))
    if p == math.inf:
        return max(math.fsum(abs(complex(A[i, j])) for j in range(cols)) for i in range(rows))
    if p == 2:
        return svd_top(A)
    raise ValueError(f"no classical operator norm for p={p}")


def gauss_solve(M, b):
    """Solve ``M x = b`` by Gaussian elimination with partial pivoting."""
    M = [list(map(complex, row)) for row in np.asarray(M)]
    b = [complex(v) for v in np.asarray(b)]
    n = len(M)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(M[r][col]))
        if M[piv][col] == 0:
            raise ZeroDivisionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            if f != 0:
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
                b[r] -= f * b[col]
    x = [0j] * n
    for r in reversed(range(n)):
        acc = b[r] - sum(M[r][c] * x[c] for c in range(r + 1, n))
        x[r] = acc / M[r][r]
    return np.array(x)


def riesz_solve(a, G):
    """``f`` with ``phi(h) = f^H G h`` for the functional with coefficients ``a``."""
    return gauss_solve(G, np.conj(np.asarray(a)))


def _ip(x, y, G):
    return complex(np.conj(y) @ G @ x)


def project_ls(x, gens, G=None, rtol=1e-10):
    """Projection of ``x`` onto ``span(gens)`` by modified Gram-Schmidt in the
    ``G`` inner product.  Returns ``(Px, residual)``."""
    x = np.asarray(x, dtype=complex)
    d = x.size
    G = np.eye(d) if G is None else np.asarray(G)
    ortho = []
    for g in gens:
        v = np.array(g, dtype=complex)
        size0 = math.sqrt(max(_ip(v, v, G).real, 0.0))
        for q in ortho:
            v = v - _ip(v, q, G) * q
        for q in ortho:  # second pass for stability
            v = v - _ip(v, q, G) * q
        nv = math.sqrt(max(_ip(v, v, G).real, 0.0))
        if nv > rtol * max(size0, 1e-300) and nv > 1e-300:
            ortho.append(v / nv)
    px = np.zeros(d, dtype=complex)
    for q in ortho:
        px = px + _ip(x, q, G) * q
    return px, x - px


def hb_interval_lp(B, v, z, psis, mu, p):
    """Classical interval ``[eta, xi]`` for extending a functional by one
    direction on a single atom.

    ``B`` holds the domain basis as columns, ``v`` the functional's values
    on it, ``psis`` the rows of the max-part of sigma and ``mu * ||.||_p``
    its norm part (``mu`` may be ``None``).
    """
    B = np.asarray(B, dtype=float).reshape(len(z), -1)
    v = np.asarray(v, dtype=float).reshape(-1)
    z = np.asarray(z, dtype=float)
    psis = np.asarray(psis, dtype=float).reshape(-1, len(z))
    xi = _hb_lp(B, v, z, psis, mu, p, sign=+1)
    eta = -_hb_lp(B, v, z, psis, mu, p, sign=-1)
    return eta, xi


def _hb_lp(B, v, z, psis, mu, p, sign):
    # sign=+1: min_c sigma(Bc + z) - v.c ; sign=-1: min_c sigma(-z - Bc) + v.c
    d, k = B.shape
    m = psis.shape[0]
    has_norm = mu is not None
    if k == 0 and m == 0 and not has_norm:
        return 0.0
    # variables: c (k, free), t (1 if m, free), norm auxiliaries
    n_aux = 0
    if has_norm:
        n_aux = d if p == 1 else 1
    nv = k + (1 if m else 0) + n_aux
    cost = np.zeros(nv)
    cost[:k] = -sign * v
    rows, rhs = [], []
    Bs = sign * B
    zs = sign * z
    if m:
        cost[k] = 1.0
        for i in range(m):
            row = np.zeros(nv)
            row[:k] = psis[i] @ Bs
            row[k] = -1.0
            rows.append(row)
            rhs.append(-psis[i] @ zs)
    if has_norm:
        off = k + (1 if m else 0)
        if p == 1:
            cost[off:off + d] = mu
        else:
            cost[off] = mu
        for l in range(d):
            for s in (1.0, -1.0):
                row = np.zeros(nv)
                row[:k] = s * Bs[l]
                row[off + (l if p == 1 else 0)] = -1.0
                rows.append(row)
                rhs.append(-s * zs[l])
    if nv == 0:
        return 0.0
    res = linprog(cost, A_ub=np.array(rows) if rows else None, b_ub=np.array(rhs) if rhs else None,
                  bounds=[(None, None)] * nv, method="highs-ds")
    if res.status != 0:
        raise RuntimeError(f"oracle LP failed: {res.message}")
    return float(res.fun)


def modulus(x):
    return abs(complex(x))


def normalise(x):
    x = complex(x)
    return 0j if x == 0 else x / abs(x)


def freudenthal(x, n):
    return min(math.floor(x * 2 ** n) / 2 ** n, float(n))


def adjoint(T, G_in, G_out):
    """``G_in^{-1} T^H G_out`` column by column with Gaussian elimination."""
    T = np.asarray(T)
    M = np.conj(T.T) @ np.asarray(G_out)
    cols = [gauss_solve(G_in, M[:, j]) for j in range(M.shape[1])]
    return np.stack(cols, axis=1)


def classical_suite(name, *inputs):
    """Dispatch to the classical single-atom implementation ``name``.

    Inputs may be ``AtomSlice`` objects or plain values.
    """
    args = [a.value if isinstance(a, AtomSlice) else a for a in inputs]
    if name == "norm_p":
        return norm_p(*args)
    if name == "opnorm_p":
        return opnorm_p(*args)
    if name == "svd_top":
        return svd_top(*args)
    if name == "project_ls":
        return project_ls(*args)
    if name == "riesz_solve":
        return riesz_solve(*args)
    if name == "hb_interval_lp":
        return hb_interval_lp(*args)
    if name == "modulus":
        return modulus(*args)
    if name == "support":
        return complex(args[0]) != 0
    if name == "normalise":
        return normalise(*args)
    if name == "freudenthal":
        return freudenthal(*args)
    if name == "adjoint":
        return adjoint(*args)
    raise ValueError(f"unsupported oracle operation {name!r}")
