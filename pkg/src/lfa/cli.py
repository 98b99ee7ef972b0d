"""Command-line driver: ``lfa verify | compute | gen``.

Exit codes: 0 success, 1 a check failed or the input had the wrong
shape, 2 usage error or malformed input.
"""

import argparse
import sys

from . import io as lio
from .errors import LFAError, ShapeError
from .generate import KINDS, generate
from .hahn_banach import RHO_RULES, ExtensionState, hb_extend_full, hb_extend_step
from .hilbert import adjoint, as_gram, project_submodule, riesz_constructive, riesz_direct
from .normed import NormSpec, norm, vector_normalise
from .operators import operator_norm
from .scalar import COMPLEX, REAL, freudenthal, normalise_scalar
from .suites import SUITES, run_suite

TASKS = ("norm", "normalise", "project", "riesz", "hb-extend", "opnorm", "freudenthal",
         "adjoint")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {v}")
    return v


def _tol(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser():
    parser = _Parser(prog="lfa", description="Functional analysis over a lattice of scalars.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    v = sub.add_parser("verify", help="run a randomised verification suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--trials", type=_positive, default=1000)
    v.add_argument("--atoms", type=_positive, default=4)
    v.add_argument("--dim", type=_positive, default=3)
    v.add_argument("--seed", type=_nonneg_int, default=0)
    v.add_argument("--tol", type=_tol, default=None,
                   help="override both the 1e-9 and 1e-12 tolerance classes")
    v.add_argument("--field", choices=(REAL, COMPLEX), default=REAL)
    v.add_argument("--out", default=None)
    v.add_argument("--timing", action="store_true", help="record wall_time (breaks byte identity)")

    c = sub.add_parser("compute", help="run one operation on JSON input")
    c.add_argument("task", choices=TASKS)
    c.add_argument("input", help="JSON file, or - for stdin")
    c.add_argument("--out", default=None)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("--atoms", type=_positive, default=2)
    g.add_argument("--dim", type=_positive, default=3)
    g.add_argument("--seed", type=_nonneg_int, default=0)
    g.add_argument("--field", choices=(REAL, COMPLEX), default=REAL)
    g.add_argument("--out", default=None)
    return parser


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _field(obj, key, decode):
    if key not in obj:
        raise lio.DecodeError(f"input needs a {key!r} field")
    return decode(obj[key])


def _wrap_bare(task, obj):
    # accept the bare encodings that ``gen`` emits
    if "re" in obj and task in ("normalise", "freudenthal"):
        return {"lambda": obj, **({"n": obj["n"]} if "n" in obj else {})}
    if "entries" in obj and "dim" in obj and task in ("normalise", "norm"):
        return {"x": obj}
    if "entries" in obj and "rows" in obj and task in ("opnorm", "adjoint"):
        return {"T": obj}
    return obj


def run_compute(task, obj):
    """Decode ``obj`` for ``task``, run it and return a JSON-ready result."""
    if not isinstance(obj, dict):
        raise lio.DecodeError("input must be a JSON object")
    obj = _wrap_bare(task, obj)
    if task == "normalise":
        if "x" in obj:
            x = _field(obj, "x", lio.vector_from_json)
            spec = lio.normspec_from_json(obj["spec"]) if "spec" in obj else NormSpec()
            return {"n_x": vector_normalise(x, spec)}
        lam = _field(obj, "lambda", lio.scalar_from_json)
        return {"n_lambda": normalise_scalar(lam)}
    if task == "norm":
        x = _field(obj, "x", lio.vector_from_json)
        spec = lio.normspec_from_json(obj["spec"]) if "spec" in obj else NormSpec()
        return {"norm": norm(x, spec)}
    if task == "freudenthal":
        lam = _field(obj, "lambda", lio.scalar_from_json)
        n = obj.get("n")
        if not isinstance(n, int) or n < 1:
            raise lio.DecodeError("'n' must be a positive integer")
        return {"lambda_n": freudenthal(lam, n)}
    if task == "opnorm":
        T = _field(obj, "T", lio.matrix_from_json)
        return {"norm": operator_norm(T, obj.get("p_in", 2.0), obj.get("p_out", 2.0))}
    if task == "project":
        x = _field(obj, "x", lio.vector_from_json)
        M = [lio.vector_from_json(g) for g in obj.get("M", [])]
        if not M:
            raise lio.DecodeError("'M' needs at least one generator")
        G = lio.gram_from_json(obj["G"]) if "G" in obj else None
        Px, r = project_submodule(x, M, G)
        return {"Px": Px, "residual": r}
    if task == "riesz":
        phi = _field(obj, "phi", lio.matrix_from_json)
        G = lio.gram_from_json(obj["G"]) if "G" in obj else None
        if G is not None and G.dim != phi.cols:
            raise ShapeError("Gram matrix and functional disagree on dimension")
        out = {"f": riesz_direct(phi, G)}
        if obj.get("constructive"):
            out["f_constructive"] = riesz_constructive(phi, as_gram(G, phi.row(0)))
        return out
    if task == "hb-extend":
        sigma = _field(obj, "sigma", lio.sublinear_from_json)
        basis = [lio.vector_from_json(b) for b in obj.get("basis", [])]
        values = [lio.scalar_from_json(v) for v in obj.get("values", [])]
        rule = obj.get("rho_rule", "midpoint")
        if rule not in RHO_RULES:
            raise lio.DecodeError(f"rho_rule must be one of {RHO_RULES}")
        if basis:
            state = ExtensionState.from_values(basis, values, sigma, rule)
        else:
            if sigma.dim is None and "dim" not in obj:
                raise lio.DecodeError("give 'dim' when sigma has no functionals and the basis is empty")
            state = ExtensionState.trivial(sigma.space, sigma.dim or obj["dim"], sigma, rule)
        if "z" in obj:
            new = hb_extend_step(state, lio.vector_from_json(obj["z"]))
            return {"eta": new._meta["eta"], "xi": new._meta["xi"], "rho": new._meta["rho"],
                    "coeffs": new.coeffs}
        return {"coeffs": hb_extend_full(state).coeffs}
    if task == "adjoint":
        T = _field(obj, "T", lio.matrix_from_json)
        G_in = lio.gram_from_json(obj["G_in"]) if "G_in" in obj else None
        G_out = lio.gram_from_json(obj["G_out"]) if "G_out" in obj else None
        return {"T_star": adjoint(T, G_in, G_out)}
    raise UsageError(f"unknown task {task!r}")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "verify":
        report = run_suite(args.suite, args.trials, args.atoms, args.dim, args.seed, args.tol,
                           args.field, args.timing)
        _emit(lio.dumps(report.as_dict()), args.out)
        return 0 if report.ok else 1

    if args.command == "gen":
        try:
            obj = generate(args.kind, args.seed, args.atoms, args.dim, args.field)
        except ValueError as exc:
            print(f"lfa gen: {exc}", file=sys.stderr)
            return 2
        _emit(lio.dumps(obj), args.out)
        return 0

    try:
        text = _read(args.input)
    except OSError as exc:
        print(f"lfa compute: cannot read input: {exc}", file=sys.stderr)
        return 2
    try:
        obj = lio.loads(text)
        result = run_compute(args.task, obj)
    except (lio.DecodeError, UsageError) as exc:
        print(f"lfa compute: {exc}", file=sys.stderr)
        return 2
    except (ShapeError, LFAError, ValueError, TypeError, KeyError, ArithmeticError) as exc:
        print(f"lfa compute: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(lio.dumps(result), args.out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
