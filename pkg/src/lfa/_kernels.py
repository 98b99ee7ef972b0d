"""Dense two-phase simplex with Bland's rule.

Solves ``min c.x  s.t.  A x <= b, x >= 0`` for small dense problems.
Two implementations of the same pivoting sequence live here: explicit
loops compiled with numba, and a vectorised numpy version used when
numba is unavailable or disabled with ``LFA_NUMBA=0``.

Status codes: 0 optimal, 1 infeasible, 2 unbounded, 3 iteration limit.
"""

import numpy as np

from ._config import USE_NUMBA

OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT = 0, 1, 2, 3
STATUS_NAMES = {OPTIMAL: "optimal", INFEASIBLE: "infeasible",
                UNBOUNDED: "unbounded", ITERATION_LIMIT: "iteration limit"}


def _identity_decorator(*args, **kwargs):
    def wrap(fn):
        return fn
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap


try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    njit = _identity_decorator
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# loop implementation (numba)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _pivot_loops(T, basis, row, col):
    m1, w = T.shape
    piv = T[row, col]
    for j in range(w):
        T[row, j] /= piv
    for i in range(m1):
        if i != row:
            f = T[i, col]
            if f != 0.0:
                for j in range(w):
                    T[i, j] -= f * T[row, j]
    basis[row] = col


@njit(cache=True)
def _run_loops(T, basis, cost, n_allowed, tol, max_iter):
    m, w = T.shape
    rhs = w - 1
    for _ in range(max_iter):
        enter = -1
        for j in range(n_allowed):
            is_basic = False
            for i in range(m):
                if basis[i] == j:
                    is_basic = True
                    break
            if is_basic:
                continue
            r = cost[j]
            for i in range(m):
                r -= cost[basis[i]] * T[i, j]
            if r < -tol:
                enter = j
                break
        if enter < 0:
            return 0
        leave = -1
        best = 0.0
        for i in range(m):
            a = T[i, enter]
            if a > tol:
                ratio = T[i, rhs] / a
                if leave < 0 or ratio < best - tol or (ratio <= best + tol and basis[i] < basis[leave]):
                    if leave < 0 or ratio < best - tol:
                        best = ratio
                    leave = i
        if leave < 0:
            return 2
        _pivot_loops(T, basis, leave, enter)
    return 3


@njit(cache=True)
def _lp_loops(c, A, b, tol, max_iter):
    m, k = A.shape
    n_art = 0
    for i in range(m):
        if b[i] < 0:
            n_art += 1
    ncol = k + m + n_art
    T = np.zeros((m, ncol + 1))
    basis = np.empty(m, dtype=np.int64)
    a = 0
    for i in range(m):
        sgn = 1.0 if b[i] >= 0 else -1.0
        for j in range(k):
            T[i, j] = sgn * A[i, j]
        T[i, k + i] = sgn
        T[i, ncol] = sgn * b[i]
        if sgn > 0:
            basis[i] = k + i
        else:
            T[i, k + m + a] = 1.0
            basis[i] = k + m + a
            a += 1
    x = np.zeros(k)
    if n_art > 0:
        cost1 = np.zeros(ncol)
        for j in range(k + m, ncol):
            cost1[j] = 1.0
        st = _run_loops(T, basis, cost1, ncol, tol, max_iter)
        if st != 0:
            return st, x, 0.0
        infeas = 0.0
        for i in range(m):
            if basis[i] >= k + m:
                infeas += T[i, ncol]
        scale = 1.0
        for i in range(m):
            if abs(b[i]) > scale:
                scale = abs(b[i])
        if infeas > 1e-9 * scale:
            return 1, x, 0.0
        for i in range(m):
            if basis[i] >= k + m:
                for j in range(k + m):
                    if abs(T[i, j]) > tol:
                        _pivot_loops(T, basis, i, j)
                        break
    cost2 = np.zeros(ncol)
    for j in range(k):
        cost2[j] = c[j]
    st = _run_loops(T, basis, cost2, k + m, tol, max_iter)
    if st != 0:
        return st, x, 0.0
    for i in range(m):
        if basis[i] < k:
            x[basis[i]] = T[i, ncol]
    obj = 0.0
    for j in range(k):
        obj += c[j] * x[j]
    return 0, x, obj


@njit(cache=True)
def _lp_batch_loops(C, A, B, tol, max_iter):
    n, m, k = A.shape
    status = np.zeros(n, dtype=np.int64)
    X = np.zeros((n, k))
    obj = np.zeros(n)
    for t in range(n):
        st, x, o = _lp_loops(C[t], A[t], B[t], tol, max_iter)
        status[t] = st
        X[t] = x
        obj[t] = o
    return status, X, obj


# ---------------------------------------------------------------------------
# vectorised numpy implementation
# ---------------------------------------------------------------------------

def _pivot_numpy(T, basis, row, col):
    T[row] /= T[row, col]
    f = T[:, col].copy()
    f[row] = 0.0
    T -= np.outer(f, T[row])
    basis[row] = col


def _run_numpy(T, basis, cost, n_allowed, tol, max_iter):
    rhs = T.shape[1] - 1
    for _ in range(max_iter):
        reduced = cost[:n_allowed] - cost[basis] @ T[:, :n_allowed]
        reduced[basis[basis < n_allowed]] = 0.0
        cand = np.flatnonzero(reduced < -tol)
        if cand.size == 0:
            return OPTIMAL
        enter = cand[0]
        col = T[:, enter]
        ok = np.flatnonzero(col > tol)
        if ok.size == 0:
            return UNBOUNDED
        ratios = T[ok, rhs] / col[ok]
        # ties resolved exactly as in the loop version
        leave = -1
        cur = 0.0
        for i, r in zip(ok, ratios):
            if leave < 0 or r < cur - tol or (r <= cur + tol and basis[i] < basis[leave]):
                if leave < 0 or r < cur - tol:
                    cur = r
                leave = i
        _pivot_numpy(T, basis, leave, enter)
    return ITERATION_LIMIT


def _lp_numpy(c, A, b, tol, max_iter):
    m, k = A.shape
    neg = b < 0
    n_art = int(neg.sum())
    ncol = k + m + n_art
    sgn = np.where(neg, -1.0, 1.0)
    T = np.zeros((m, ncol + 1))
    T[:, :k] = sgn[:, None] * A
    T[np.arange(m), k + np.arange(m)] = sgn
    T[:, ncol] = sgn * b
    basis = k + np.arange(m)
    art_rows = np.flatnonzero(neg)
    T[art_rows, k + m + np.arange(n_art)] = 1.0
    basis[art_rows] = k + m + np.arange(n_art)
    x = np.zeros(k)
    if n_art:
        cost1 = np.zeros(ncol)
        cost1[k + m:] = 1.0
        st = _run_numpy(T, basis, cost1, ncol, tol, max_iter)
        if st != OPTIMAL:
            return st, x, 0.0
        infeas = T[basis >= k + m, ncol].sum()
        if infeas > 1e-9 * max(1.0, np.abs(b).max()):
            return INFEASIBLE, x, 0.0
        for i in np.flatnonzero(basis >= k + m):
            nz = np.flatnonzero(np.abs(T[i, :k + m]) > tol)
            if nz.size:
                _pivot_numpy(T, basis, i, nz[0])
    cost2 = np.zeros(ncol)
    cost2[:k] = c
    st = _run_numpy(T, basis, cost2, k + m, tol, max_iter)
    if st != OPTIMAL:
        return st, x, 0.0
    inb = basis < k
    x[basis[inb]] = T[inb, ncol]
    return OPTIMAL, x, float(c @ x)


def _lp_batch_numpy(C, A, B, tol, max_iter):
    n, m, k = A.shape
    status = np.zeros(n, dtype=np.int64)
    X = np.zeros((n, k))
    obj = np.zeros(n)
    for t in range(n):
        status[t], X[t], obj[t] = _lp_numpy(C[t], A[t], B[t], tol, max_iter)
    return status, X, obj


def lp_batch(C, A, B, tol=1e-11, max_iter=5000, backend=None):
    """Solve one LP per leading index.

    ``C`` is ``(n, k)``, ``A`` is ``(n, m, k)``, ``B`` is ``(n, m)``.
    Returns ``(status, X, objective)``.  ``backend`` is ``"numba"``,
    ``"numpy"`` or ``None`` for the configured default.
    """
    C = np.ascontiguousarray(C, dtype=np.float64)
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    if backend is None:
        backend = "numba" if (USE_NUMBA and HAVE_NUMBA) else "numpy"
    if backend == "numba":
        return _lp_batch_loops(C, A, B, tol, max_iter)
    if backend == "numpy":
        return _lp_batch_numpy(C, A, B, tol, max_iter)
    raise ValueError(f"unknown backend {backend!r}")


def active_backend():
    return "numba" if (USE_NUMBA and HAVE_NUMBA) else "numpy"
