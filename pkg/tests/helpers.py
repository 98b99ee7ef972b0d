"""Constructors and hypothesis strategies shared by the tests."""

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from lfa.scalar import LScalar
from lfa.vectors import LMatrix, LVector


def S(*vals, field=None):
    return LScalar(list(vals), field=field)


def V(rows, field=None):
    """Vector from per-atom rows: ``V([[x0, y0], [x1, y1]])``."""
    return LVector(np.array(rows), field=field)


def M(per_atom, field=None):
    return LMatrix(np.array(per_atom), field=field)


# magnitudes in [1e-6, 1e3] keep products and reciprocals well inside float range
_mag = st.floats(1e-6, 1e3)
finite = st.one_of(_mag, _mag.map(lambda v: -v))
# values with a sprinkling of exact zeros so supports are non-trivial
sparse = st.one_of(st.just(0.0), finite)
positive = st.one_of(st.just(0.0), st.floats(1e-6, 1e3))


def scalars(n=3, elements=sparse):
    return hnp.arrays(np.float64, n, elements=elements).map(lambda a: LScalar(a))


def complex_scalars(n=3):
    return st.tuples(hnp.arrays(np.float64, n, elements=sparse),
                     hnp.arrays(np.float64, n, elements=sparse)).map(
        lambda t: LScalar(t[0] + 1j * t[1], field="complex"))


def families(n=3, size=(1, 5), elements=sparse):
    return st.lists(scalars(n, elements), min_size=size[0], max_size=size[1])


def vectors(n=3, d=3, elements=sparse):
    return hnp.arrays(np.float64, (n, d), elements=elements).map(lambda a: LVector(a))
