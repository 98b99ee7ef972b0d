"""Elements of free modules and matrices over the scalar algebra.

Data is stored atom-major: an ``LVector`` of dimension ``d`` over ``n``
atoms holds an ``(n, d)`` array, an ``LMatrix`` an ``(n, rows, cols)``
array, so batched numpy linear algebra applies directly per atom.
"""

from numbers import Number

import numpy as np

from .errors import FieldError, ShapeError
from .scalar import COMPLEX, REAL, AtomSpace, Idempotent, LScalar


def _freeze(arr):
    arr.setflags(write=False)
    return arr


def _prepare(arr, field):
    if field is None:
        field = COMPLEX if np.iscomplexobj(arr) else REAL
    if field == REAL:
        if np.iscomplexobj(arr):
            if np.any(arr.imag != 0):
                raise FieldError("real data with non-zero imaginary part")
            arr = arr.real
        arr = np.ascontiguousarray(arr, dtype=np.float64)
    elif field == COMPLEX:
        arr = np.ascontiguousarray(arr, dtype=np.complex128)
    else:
        raise ValueError(f"unknown scalar field {field!r}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    return arr, field


def _scalar_values(s, field):
    if isinstance(s, Idempotent):
        return s.bits.astype(np.float64)
    if field == REAL and s.field == COMPLEX:
        raise FieldError("complex scalar acting on a real module")
    return s.values


class LVector:
    """Element of the free module of dimension ``dim``."""

    __slots__ = ("space", "data", "field")
    __array_priority__ = 100

    def __init__(self, data, field=None, space=None):
        arr = np.array(data, copy=True)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ShapeError("LVector data must be (atoms, dim) with both positive")
        arr, field = _prepare(arr, field)
        self.data = _freeze(arr)
        self.field = field
        if space is None:
            space = AtomSpace(arr.shape[0])
        elif space.atom_count != arr.shape[0]:
            raise ShapeError("data does not match atom space")
        self.space = space

    @classmethod
    def _wrap(cls, arr, field, space):
        obj = cls.__new__(cls)
        if field == REAL and np.iscomplexobj(arr):
            arr = arr.real
        obj.data = _freeze(np.ascontiguousarray(arr))
        obj.field = field
        obj.space = space
        return obj

    @classmethod
    def from_entries(cls, entries, field=None):
        """Build from a list of ``LScalar`` coordinates."""
        entries = list(entries)
        if not entries:
            raise ShapeError("need at least one entry")
        space = entries[0].space
        for e in entries:
            space.check(e.space)
        if field is None:
            field = COMPLEX if any(e.field == COMPLEX for e in entries) else REAL
        return cls(np.stack([e.values for e in entries], axis=1), field=field, space=space)

    @classmethod
    def zeros(cls, space, dim, field=REAL):
        return cls(np.zeros((space.atom_count, dim)), field=field, space=space)

    @classmethod
    def basis(cls, space, dim, k, field=REAL):
        arr = np.zeros((space.atom_count, dim))
        arr[:, k] = 1.0
        return cls(arr, field=field, space=space)

    @property
    def n(self):
        return self.space.atom_count

    @property
    def dim(self):
        return self.data.shape[1]

    @property
    def entries(self):
        return [LScalar._wrap(self.data[:, k].copy(), self.field, self.space) for k in range(self.dim)]

    def __getitem__(self, k):
        return LScalar._wrap(self.data[:, k].copy(), self.field, self.space)

    def as_field(self, field):
        if field == self.field:
            return self
        return LVector(self.data, field=field, space=self.space)

    def _check(self, other):
        if not isinstance(other, LVector):
            raise TypeError(f"expected LVector, got {type(other).__name__}")
        self.space.check(other.space)
        if other.dim != self.dim:
            raise ShapeError(f"dimension {self.dim} vs {other.dim}")
        if other.field != self.field:
            raise FieldError("scalar fields differ")
        return other

    def __add__(self, other):
        other = self._check(other)
        return LVector._wrap(self.data + other.data, self.field, self.space)

    def __sub__(self, other):
        other = self._check(other)
        return LVector._wrap(self.data - other.data, self.field, self.space)

    def __neg__(self):
        return LVector._wrap(-self.data, self.field, self.space)

    def scale(self, s):
        """Module action of a scalar, idempotent or plain number."""
        if isinstance(s, Number):
            if isinstance(s, complex) and s.imag != 0 and self.field == REAL:
                raise FieldError("complex number acting on a real module")
            return LVector._wrap(self.data * s, self.field, self.space)
        self.space.check(s.space)
        return LVector._wrap(self.data * _scalar_values(s, self.field)[:, None],
                             self.field, self.space)

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def conj(self):
        return LVector._wrap(np.conj(self.data), self.field, self.space)

    def __eq__(self, other):
        if not isinstance(other, LVector):
            return NotImplemented
        return (self.space == other.space and self.field == other.field
                and bool(np.array_equal(self.data, other.data)))

    __hash__ = None

    def allclose(self, other, rtol=1e-9, atol=1e-12):
        return bool(np.allclose(self.data, other.data, rtol=rtol, atol=atol))

    def __repr__(self):
        return f"LVector(dim={self.dim}, atoms={self.n}, field={self.field!r})"


class LMatrix:
    """Matrix with scalar-algebra entries; an operator between free modules."""

    __slots__ = ("space", "data", "field")
    __array_priority__ = 100

    def __init__(self, data, field=None, space=None):
        arr = np.array(data, copy=True)
        if arr.ndim != 3 or 0 in arr.shape:
            raise ShapeError("LMatrix data must be (atoms, rows, cols)")
        arr, field = _prepare(arr, field)
        self.data = _freeze(arr)
        self.field = field
        if space is None:
            space = AtomSpace(arr.shape[0])
        elif space.atom_count != arr.shape[0]:
            raise ShapeError("data does not match atom space")
        self.space = space

    @classmethod
    def _wrap(cls, arr, field, space):
        obj = cls.__new__(cls)
        if field == REAL and np.iscomplexobj(arr):
            arr = arr.real
        obj.data = _freeze(np.ascontiguousarray(arr))
        obj.field = field
        obj.space = space
        return obj

    @classmethod
    def identity(cls, space, d, field=REAL):
        return cls(np.broadcast_to(np.eye(d), (space.atom_count, d, d)), field=field, space=space)

    @classmethod
    def from_rows(cls, rows):
        """Stack LVectors as the rows of a matrix."""
        rows = list(rows)
        if not rows:
            raise ShapeError("need at least one row")
        for r in rows[1:]:
            rows[0]._check(r)
        return cls(np.stack([r.data for r in rows], axis=1), field=rows[0].field, space=rows[0].space)

    @classmethod
    def from_columns(cls, cols):
        cols = list(cols)
        if not cols:
            raise ShapeError("need at least one column")
        for c in cols[1:]:
            cols[0]._check(c)
        return cls(np.stack([c.data for c in cols], axis=2), field=cols[0].field, space=cols[0].space)

    @classmethod
    def from_entries(cls, entries, field=None):
        """Build from a row-major nested list of ``LScalar``."""
        space = entries[0][0].space
        if field is None:
            field = COMPLEX if any(e.field == COMPLEX for row in entries for e in row) else REAL
        arr = np.stack([np.stack([e.values for e in row], axis=-1) for row in entries], axis=1)
        return cls(arr, field=field, space=space)

    @property
    def n(self):
        return self.space.atom_count

    @property
    def rows(self):
        return self.data.shape[1]

    @property
    def cols(self):
        return self.data.shape[2]

    @property
    def shape(self):
        return self.data.shape[1:]

    def entry(self, i, j):
        return LScalar._wrap(self.data[:, i, j].copy(), self.field, self.space)

    def row(self, i):
        return LVector._wrap(self.data[:, i, :].copy(), self.field, self.space)

    def column(self, j):
        return LVector._wrap(self.data[:, :, j].copy(), self.field, self.space)

    def as_field(self, field):
        if field == self.field:
            return self
        return LMatrix(self.data, field=field, space=self.space)

    def _check_same(self, other):
        self.space.check(other.space)
        if self.shape != other.shape:
            raise ShapeError(f"shape {self.shape} vs {other.shape}")
        if self.field != other.field:
            raise FieldError("scalar fields differ")
        return other

    def __add__(self, other):
        self._check_same(other)
        return LMatrix._wrap(self.data + other.data, self.field, self.space)

    def __sub__(self, other):
        self._check_same(other)
        return LMatrix._wrap(self.data - other.data, self.field, self.space)

    def __neg__(self):
        return LMatrix._wrap(-self.data, self.field, self.space)

    def scale(self, s):
        if isinstance(s, Number):
            return LMatrix._wrap(self.data * s, self.field, self.space)
        self.space.check(s.space)
        return LMatrix._wrap(self.data * _scalar_values(s, self.field)[:, None, None],
                             self.field, self.space)

    def conj_transpose(self):
        return LMatrix._wrap(np.conj(np.swapaxes(self.data, 1, 2)), self.field, self.space)

    def __matmul__(self, other):
        if isinstance(other, LVector):
            return apply(self, other)
        if isinstance(other, LMatrix):
            return compose(self, other)
        return NotImplemented

    def __call__(self, x):
        """Evaluate as a functional (one row) or apply as an operator."""
        y = apply(self, x)
        return y[0] if self.rows == 1 else y

    def __eq__(self, other):
        if not isinstance(other, LMatrix):
            return NotImplemented
        return (self.space == other.space and self.field == other.field
                and bool(np.array_equal(self.data, other.data)))

    __hash__ = None

    def allclose(self, other, rtol=1e-9, atol=1e-12):
        return bool(np.allclose(self.data, other.data, rtol=rtol, atol=atol))

    def __repr__(self):
        return f"LMatrix({self.rows}x{self.cols}, atoms={self.n}, field={self.field!r})"


def _join_field(a, b):
    return COMPLEX if COMPLEX in (a.field, b.field) else REAL


def apply(T, x):
    """Per-atom matrix-vector product ``T x``."""
    T.space.check(x.space)
    if T.cols != x.dim:
        raise ShapeError(f"cannot apply {T.rows}x{T.cols} matrix to dimension {x.dim}")
    out = np.einsum("nij,nj->ni", T.data, x.data)
    return LVector._wrap(out, _join_field(T, x), T.space)


def compose(S, T):
    """Per-atom matrix product ``S T``."""
    S.space.check(T.space)
    if S.cols != T.rows:
        raise ShapeError(f"cannot compose {S.shape} with {T.shape}")
    return LMatrix._wrap(S.data @ T.data, _join_field(S, T), S.space)


def functional(coeffs):
    """The functional ``x -> sum_k coeffs_k x_k`` as a one-row matrix."""
    return LMatrix._wrap(coeffs.data[:, None, :].copy(), coeffs.field, coeffs.space)


def mask(x, pi):
    """``pi x`` for an idempotent ``pi``."""
    return x.scale(pi)
