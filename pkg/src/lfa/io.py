"""JSON encoding of the library's value types.

The field names are part of the external contract.  ``inf`` exponents
are written as the string ``"inf"``.
"""

import json

import numpy as np

from .errors import ShapeError
from .hahn_banach import SublinearSpec
from .hilbert import GramForm
from .lp import LpElement
from .normed import INF, NormSpec, parse_p
from .scalar import COMPLEX, REAL, AtomSpace, Idempotent, LScalar
from .vectors import LMatrix, LVector


class DecodeError(ValueError):
    """Input is not a well-formed encoding of the requested type."""


def _p_out(p):
    return "inf" if p == INF else float(p)


def _p_in(p):
    try:
        return parse_p(p)
    except (TypeError, ValueError) as exc:
        raise DecodeError(f"bad exponent {p!r}") from exc


def _require(obj, *keys):
    if not isinstance(obj, dict):
        raise DecodeError(f"expected an object, got {type(obj).__name__}")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise DecodeError(f"missing fields {missing}")


# -- scalars -------------------------------------------------------------------

def scalar_to_json(lam):
    v = lam.values
    return {"atoms": lam.n, "re": np.real(v).tolist(),
            "im": np.imag(v).tolist() if lam.field == COMPLEX else [0.0] * lam.n,
            "field": lam.field}


def scalar_from_json(obj):
    _require(obj, "atoms", "re")
    n = obj["atoms"]
    field = obj.get("field", REAL)
    if field not in (REAL, COMPLEX):
        raise DecodeError(f"unknown field {field!r}")
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", [0.0] * len(re)), dtype=float)
    if re.shape != (n,) or im.shape != (n,):
        raise ShapeError(f"expected {n} atom values")
    if field == REAL:
        if np.any(im != 0):
            raise DecodeError("real scalar with non-zero imaginary part")
        return LScalar(re, field=REAL, space=AtomSpace(n))
    return LScalar(re + 1j * im, field=COMPLEX, space=AtomSpace(n))


def idempotent_to_json(pi):
    return {"atoms": pi.space.atom_count, "bits": [int(b) for b in pi.bits]}


def idempotent_from_json(obj):
    _require(obj, "atoms", "bits")
    bits = obj["bits"]
    if len(bits) != obj["atoms"] or any(b not in (0, 1, True, False) for b in bits):
        raise DecodeError("bits must be 0/1, one per atom")
    return Idempotent([bool(b) for b in bits], AtomSpace(obj["atoms"]))


# -- vectors and matrices ------------------------------------------------------

def vector_to_json(x):
    return {"atoms": x.n, "dim": x.dim, "entries": [scalar_to_json(e) for e in x.entries]}


def vector_from_json(obj):
    _require(obj, "atoms", "dim", "entries")
    entries = [scalar_from_json(e) for e in obj["entries"]]
    if len(entries) != obj["dim"]:
        raise ShapeError(f"dim {obj['dim']} but {len(entries)} entries")
    if any(e.n != obj["atoms"] for e in entries):
        raise ShapeError("entry atom count disagrees with the vector")
    return LVector.from_entries(entries)


def matrix_to_json(T):
    return {"atoms": T.n, "rows": T.rows, "cols": T.cols,
            "entries": [[scalar_to_json(T.entry(i, j)) for j in range(T.cols)]
                        for i in range(T.rows)]}


def matrix_from_json(obj):
    _require(obj, "atoms", "rows", "cols", "entries")
    rows = obj["entries"]
    if len(rows) != obj["rows"] or any(len(r) != obj["cols"] for r in rows):
        raise ShapeError("entries do not match rows x cols")
    grid = [[scalar_from_json(e) for e in r] for r in rows]
    if any(e.n != obj["atoms"] for r in grid for e in r):
        raise ShapeError("entry atom count disagrees with the matrix")
    return LMatrix.from_entries(grid)


# -- composite types -----------------------------------------------------------

def normspec_to_json(spec):
    out = {"kind": spec.kind, "p": _p_out(spec.p)}
    if spec.gram is not None:
        out["gram"] = matrix_to_json(spec.gram)
    if spec.weights is not None:
        out["weights"] = [scalar_to_json(w) for w in spec.weights]
    return out


def normspec_from_json(obj):
    _require(obj, "kind")
    gram = matrix_from_json(obj["gram"]) if obj.get("gram") is not None else None
    weights = None
    if obj.get("weights") is not None:
        weights = tuple(scalar_from_json(w) for w in obj["weights"])
    return NormSpec(obj["kind"], _p_in(obj.get("p", 2.0)), gram, weights)


def lp_to_json(f):
    return {"S": list(f.S), "p": _p_out(f.p),
            "values": {s: vector_to_json(f.values[s]) for s in f.S},
            "value_norm": normspec_to_json(f.value_norm)}


def lp_from_json(obj):
    _require(obj, "S", "p", "values")
    S = tuple(obj["S"])
    if set(obj["values"]) != set(S):
        raise ShapeError("values must have exactly the keys of S")
    values = {s: vector_from_json(obj["values"][s]) for s in S}
    vn = normspec_from_json(obj["value_norm"]) if "value_norm" in obj else NormSpec()
    return LpElement(S, _p_in(obj["p"]), values, vn)


def sublinear_to_json(sigma):
    out = {"psis": [matrix_to_json(p) for p in sigma.psis]}
    if sigma.norm_mu is not None:
        out["norm_mu"] = scalar_to_json(sigma.norm_mu)
        out["norm_p"] = _p_out(sigma.norm_p)
    return out


def sublinear_from_json(obj):
    _require(obj, "psis")
    psis = tuple(matrix_from_json(p) for p in obj["psis"])
    mu = scalar_from_json(obj["norm_mu"]) if obj.get("norm_mu") is not None else None
    return SublinearSpec(psis, mu, _p_in(obj.get("norm_p", 1.0)))


def gram_to_json(G):
    return {"G": matrix_to_json(G.G)}


def gram_from_json(obj):
    _require(obj, "G")
    return GramForm(matrix_from_json(obj["G"]))


_ENCODERS = [
    (Idempotent, idempotent_to_json),
    (LScalar, scalar_to_json),
    (LVector, vector_to_json),
    (LMatrix, matrix_to_json),
    (NormSpec, normspec_to_json),
    (LpElement, lp_to_json),
    (SublinearSpec, sublinear_to_json),
    (GramForm, gram_to_json),
]


def to_json(obj):
    """Encode any library value (or nested list/dict/tuple of them)."""
    for cls, enc in _ENCODERS:
        if isinstance(obj, cls):
            return enc(obj)
    if isinstance(obj, dict):
        return {k: to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return "inf" if obj == INF else float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return to_json(obj.tolist())
    return obj


def dumps(obj):
    """Canonical text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(to_json(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"malformed JSON: {exc}") from exc
