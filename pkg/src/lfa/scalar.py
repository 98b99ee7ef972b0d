"""Scalars of a Dedekind complete unital f-algebra, atomic model.

An element is a function on a finite set of atoms; ring, lattice and
Boolean operations act atom by atom.  Real elements are stored as
``float64`` arrays, complex ones as ``complex128``.
"""

from dataclasses import dataclass
from functools import reduce
from numbers import Number

import numpy as np

from ._config import ORDER_SLACK
from .errors import AtomSpaceMismatch, FieldError, NotInvertible, NotRegular

REAL = "real"
COMPLEX = "complex"


@dataclass(frozen=True)
class AtomSpace:
    atom_count: int

    def __post_init__(self):
        if int(self.atom_count) < 1:
            raise ValueError("atom_count must be >= 1")

    def check(self, other):
        if self != other:
            raise AtomSpaceMismatch(self, other)
        return self


def _as_space(space, n):
    if space is None:
        return AtomSpace(n)
    if isinstance(space, int):
        space = AtomSpace(space)
    if space.atom_count != n:
        raise ValueError(f"{n} values for {space.atom_count} atoms")
    return space


def _freeze(arr):
    arr.setflags(write=False)
    return arr


def _coerce_values(values, field):
    arr = np.array(values, copy=True)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("scalar values must be a non-empty 1-d sequence")
    if field is None:
        field = COMPLEX if np.iscomplexobj(arr) else REAL
    if field == REAL:
        if np.iscomplexobj(arr):
            if np.any(arr.imag != 0):
                raise FieldError("real scalar with non-zero imaginary part")
            arr = arr.real
        arr = arr.astype(np.float64)
    elif field == COMPLEX:
        arr = arr.astype(np.complex128)
    else:
        raise ValueError(f"unknown scalar field {field!r}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("scalar values must be finite")
    return arr, field


class LScalar:
    """An element of the scalar algebra: one number per atom."""

    __slots__ = ("space", "values", "field")
    __array_priority__ = 100

    def __init__(self, values, field=None, space=None):
        arr, field = _coerce_values(values, field)
        self.values = _freeze(arr)
        self.field = field
        self.space = _as_space(space, arr.size)

    @classmethod
    def _wrap(cls, arr, field, space):
        # trusted fast path: arr already has the right dtype
        obj = cls.__new__(cls)
        if field == REAL and np.iscomplexobj(arr):
            arr = arr.real
        obj.values = _freeze(np.ascontiguousarray(arr))
        obj.field = field
        obj.space = space
        return obj

    @classmethod
    def constant(cls, c, space, field=None):
        space = _as_space(space, space if isinstance(space, int) else space.atom_count)
        if field is None:
            field = COMPLEX if isinstance(c, complex) else REAL
        return cls(np.full(space.atom_count, c), field=field, space=space)

    @classmethod
    def zero(cls, space, field=REAL):
        return cls.constant(0.0, space, field)

    @classmethod
    def one(cls, space, field=REAL):
        return cls.constant(1.0, space, field)

    @property
    def n(self):
        return self.space.atom_count

    @property
    def is_real(self):
        return self.field == REAL

    @property
    def re(self):
        return LScalar._wrap(np.real(self.values).astype(np.float64), REAL, self.space)

    @property
    def im(self):
        return LScalar._wrap(np.imag(self.values).astype(np.float64), REAL, self.space)

    def as_field(self, field):
        if field == self.field:
            return self
        return LScalar(self.values, field=field, space=self.space)

    # -- ring structure ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LScalar):
            self.space.check(other.space)
            return other
        if isinstance(other, Idempotent):
            self.space.check(other.space)
            return other.as_scalar(self.field)
        if isinstance(other, Number):
            if isinstance(other, complex) and other.imag != 0 and self.field == REAL:
                raise FieldError("cannot embed a non-real number into a real scalar algebra")
            return LScalar.constant(other if self.field == COMPLEX else float(np.real(other)),
                                    self.space, self.field)
        return NotImplemented

    def _binary(self, other, op):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.field != self.field:
            raise FieldError("scalar fields differ")
        return LScalar._wrap(op(self.values, other.values), self.field, self.space)

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return LScalar._wrap(self.values / other, self.field, self.space)
        return self * invert(other)

    def __neg__(self):
        return LScalar._wrap(-self.values, self.field, self.space)

    def __abs__(self):
        return modulus(self)

    def conj(self):
        return LScalar._wrap(np.conj(self.values), self.field, self.space)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LScalar):
            return NotImplemented
        return (self.space == other.space and self.field == other.field
                and bool(np.array_equal(self.values, other.values)))

    __hash__ = None

    def le(self, other, slack=ORDER_SLACK):
        """Order test ``self <= other`` with absolute slack."""
        other = self._coerce(other)
        _require_real(self, other)
        return bool(np.all(self.values <= other.values + slack))

    def ge(self, other, slack=ORDER_SLACK):
        other = self._coerce(other)
        return other.le(self, slack)

    def allclose(self, other, rtol=1e-9, atol=1e-12):
        other = self._coerce(other)
        return bool(np.allclose(self.values, other.values, rtol=rtol, atol=atol))

    def __repr__(self):
        return f"LScalar({np.array2string(self.values, precision=6)}, field={self.field!r})"


class Idempotent:
    """An idempotent of the scalar algebra: one bit per atom."""

    __slots__ = ("space", "bits")

    def __init__(self, bits, space=None):
        arr = np.array(bits, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("idempotent bits must be a non-empty 1-d sequence")
        if arr.dtype != np.bool_:
            if not np.all((arr == 0) | (arr == 1)):
                raise ValueError("idempotent bits must be 0 or 1")
            arr = arr.astype(bool)
        self.bits = _freeze(arr)
        self.space = _as_space(space, arr.size)

    @classmethod
    def zero(cls, space):
        space = _as_space(space, space if isinstance(space, int) else space.atom_count)
        return cls(np.zeros(space.atom_count, bool), space)

    @classmethod
    def one(cls, space):
        space = _as_space(space, space if isinstance(space, int) else space.atom_count)
        return cls(np.ones(space.atom_count, bool), space)

    @property
    def atoms(self):
        return tuple(int(i) for i in np.flatnonzero(self.bits))

    def as_scalar(self, field=REAL):
        return LScalar(self.bits.astype(np.float64), field=field, space=self.space)

    def _other(self, other):
        if not isinstance(other, Idempotent):
            return NotImplemented
        self.space.check(other.space)
        return other

    def __and__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return Idempotent(self.bits & other.bits, self.space)

    def __or__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return Idempotent(self.bits | other.bits, self.space)

    def __invert__(self):
        return Idempotent(~self.bits, self.space)

    complement = __invert__

    def __mul__(self, other):
        if isinstance(other, Idempotent):
            return self & other
        return self.as_scalar(getattr(other, "field", REAL)) * other

    __rmul__ = __mul__

    def __le__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return bool(np.all(~self.bits | other.bits))

    def __ge__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, Idempotent):
            return NotImplemented
        return self.space == other.space and bool(np.array_equal(self.bits, other.bits))

    __hash__ = None

    def is_zero(self):
        return not self.bits.any()

    def __repr__(self):
        return f"Idempotent({self.bits.astype(int).tolist()})"


# -- helpers ----------------------------------------------------------------

def _require_real(*scalars):
    for s in scalars:
        if s.field != REAL:
            raise FieldError("operation requires real scalars")


def _same(a, b):
    a.space.check(b.space)
    return a, b


def embed(c, space, field=REAL):
    """Embed a plain number as the constant scalar ``c * 1``."""
    return LScalar.constant(c, space, field)


# -- modulus and lattice operations ------------------------------------------

def modulus(lam):
    return LScalar._wrap(np.abs(lam.values).astype(np.float64), REAL, lam.space)


def sup2(a, b):
    _same(a, b)
    _require_real(a, b)
    return LScalar._wrap(np.maximum(a.values, b.values), REAL, a.space)


def inf2(a, b):
    _same(a, b)
    _require_real(a, b)
    return LScalar._wrap(np.minimum(a.values, b.values), REAL, a.space)


def pos_part(lam):
    _require_real(lam)
    return LScalar._wrap(np.maximum(lam.values, 0.0), REAL, lam.space)


def neg_part(lam):
    _require_real(lam)
    return LScalar._wrap(np.maximum(-lam.values, 0.0), REAL, lam.space)


def _family(family):
    family = list(family)
    if not family:
        raise ValueError("empty family has no supremum in the atomic model")
    space = family[0].space
    for f in family[1:]:
        space.check(f.space)
    _require_real(*family)
    return np.stack([f.values for f in family]), space


def sup_family(family):
    """Supremum of a finite non-empty family (per-atom max)."""
    stack, space = _family(family)
    return LScalar._wrap(stack.max(axis=0), REAL, space)


def inf_family(family):
    stack, space = _family(family)
    return LScalar._wrap(stack.min(axis=0), REAL, space)


def power(lam, p):
    """``lam**p`` for ``lam >= 0``; ``0**0 == 1``."""
    _require_real(lam)
    if p < 0:
        raise ValueError("exponent must be non-negative")
    if np.any(lam.values < 0):
        raise ValueError("power needs a positive element")
    return LScalar._wrap(np.power(lam.values, float(p)), REAL, lam.space)


def invert(lam):
    zero = np.flatnonzero(lam.values == 0)
    if zero.size:
        raise NotInvertible(zero)
    return LScalar._wrap(1.0 / lam.values, lam.field, lam.space)


# -- supports and idempotent structure -----------------------------------

def support(lam):
    """Smallest idempotent ``pi`` with ``pi * lam == lam``."""
    return Idempotent(lam.values != 0, lam.space)


def range_projection_seq(lam, n):
    """``lam / (lam + 1/n)``, increasing to ``support(lam)`` as ``n`` grows."""
    _require_real(lam)
    if n < 1:
        raise ValueError("n must be a positive integer")
    v = lam.values
    return LScalar._wrap(v / (v + 1.0 / n), REAL, lam.space)


def approx_invertibles(lam, n, sign=+1):
    """Invertible ``lam_n`` with ``|lam - lam_n| == 1/n`` on every atom.

    Only the real part is perturbed.  Off the supports of the positive and
    negative parts the shift is ``sign / n``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    re = np.real(lam.values)
    pos = re > 0
    neg = re < 0
    rest = ~(pos | neg)
    shift = (pos.astype(float) - neg.astype(float) + sign * rest.astype(float)) / n
    out = lam.values + shift
    return LScalar._wrap(out, lam.field, lam.space)


def normalise_scalar(lam):
    """``lam / |lam|`` on the support of ``lam`` and ``0`` elsewhere."""
    v = lam.values
    mod = np.abs(v)
    out = np.zeros_like(v)
    nz = mod != 0
    out[nz] = v[nz] / mod[nz]
    return LScalar._wrap(out, lam.field, lam.space)


def pseudo_inverse(lam):
    """Return ``(kappa, pi)`` with ``kappa * lam == pi == support(lam)``."""
    v = lam.values
    nz = v != 0
    kappa = np.zeros_like(v)
    kappa[nz] = 1.0 / v[nz]
    return LScalar._wrap(kappa, lam.field, lam.space), Idempotent(nz, lam.space)


def local_solve(lam, mu, pi):
    """Solve ``kappa * lam == pi * mu`` for ``kappa`` living on ``pi``."""
    _same(lam, mu)
    lam.space.check(pi.space)
    bad = np.flatnonzero(pi.bits & (lam.values == 0))
    if bad.size:
        raise NotRegular(bad)
    kappa, _ = pseudo_inverse(lam)
    return pi * (kappa * mu)


def set_power(mu, pi):
    """Restriction ``mu`` to the atoms of ``pi``, zero elsewhere."""
    return pi * mu


def freudenthal(lam, n):
    """Dyadic step-function approximant ``min(floor(2**n lam) / 2**n, n)``."""
    _require_real(lam)
    if n < 1:
        raise ValueError("n must be a positive integer")
    if np.any(lam.values < 0):
        raise ValueError("Freudenthal approximation needs a positive element")
    scale = 2.0 ** n
    step = np.minimum(np.floor(lam.values * scale) / scale, float(n))
    return LScalar._wrap(step, REAL, lam.space)


def step_decomposition(lam):
    """Write ``lam`` as ``sum c_k pi_k`` over disjoint idempotents.

    Returns a list of ``(value, Idempotent)`` pairs, one per distinct value.
    """
    vals = np.unique(lam.values)
    return [(v.item(), Idempotent(lam.values == v, lam.space)) for v in vals]


def join_all(family, space=None):
    family = list(family)
    if not family:
        if space is None:
            raise ValueError("need a space for an empty join")
        return Idempotent.zero(space)
    return reduce(lambda a, b: a | b, family)


def meet_all(family, space=None):
    family = list(family)
    if not family:
        if space is None:
            raise ValueError("need a space for an empty meet")
        return Idempotent.one(space)
    return reduce(lambda a, b: a & b, family)
