"""Tolerances and runtime switches shared across the package."""

import os

#: Relative tolerance for algebraic identities.
REL_TOL = 1e-9

#: Tolerance for identities that hold exactly by construction.
EXACT_TOL = 1e-12

#: Absolute slack allowed in non-strict order comparisons ``a <= b``.
ORDER_SLACK = 1e-12

#: Singular values below ``SVD_RCOND * largest`` count as zero.
SVD_RCOND = 1e-12


def _env_flag(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() not in ("0", "false", "no", "off", "")


#: Set ``LFA_NUMBA=0`` to force the pure-numpy kernels.
USE_NUMBA = _env_flag("LFA_NUMBA", True)
