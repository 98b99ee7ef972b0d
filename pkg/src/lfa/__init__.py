"""Functional analysis over an atomic Dedekind complete f-algebra.

Scalars are functions on a finite set of atoms; every operation acts
atom by atom, and ``lfa.oracle`` re-derives each one with classical
single-atom numerics.
"""

from ._config import EXACT_TOL, REL_TOL, USE_NUMBA
from .errors import (AtomSpaceMismatch, FieldError, LFAError, NotInvertible, NotRegular,
                     ShapeError, Undominated)
from .hahn_banach import (ExtensionState, SublinearSpec, hb_extend_full, hb_extend_step,
                          hb_interval, norming_functional)
from .hilbert import (GramForm, adjoint, inner, polarize, project_submodule, riesz_constructive,
                      riesz_direct)
from .lp import LpElement, dual_from_functional, functional_from_dual, functional_norm, holder, minkowski
from .normed import NormSpec, norm, vector_normalise
from .operators import operator_norm
from .scalar import (COMPLEX, REAL, AtomSpace, Idempotent, LScalar, freudenthal, modulus,
                     normalise_scalar, support)
from .suites import SUITES, run_suite
from .vectors import LMatrix, LVector

__version__ = "0.1.0"

__all__ = [
    "EXACT_TOL", "REL_TOL", "USE_NUMBA", "AtomSpaceMismatch", "FieldError", "LFAError",
    "NotInvertible", "NotRegular", "ShapeError", "Undominated", "ExtensionState",
    "SublinearSpec", "hb_extend_full", "hb_extend_step", "hb_interval", "norming_functional",
    "GramForm", "adjoint", "inner", "polarize", "project_submodule", "riesz_constructive",
    "riesz_direct", "LpElement", "dual_from_functional", "functional_from_dual",
    "functional_norm", "holder", "minkowski", "NormSpec", "norm", "vector_normalise",
    "operator_norm", "COMPLEX", "REAL", "AtomSpace", "Idempotent", "LScalar", "freudenthal",
    "modulus", "normalise_scalar", "support", "SUITES", "run_suite", "LMatrix", "LVector",
]
