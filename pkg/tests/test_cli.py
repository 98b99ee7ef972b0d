import json
import subprocess
import sys

import numpy as np
import pytest

from helpers import M, S, V
from lfa import io as lio
from lfa.cli import main
from lfa.suites import SUITES


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(lio.dumps(obj))
    return str(p)


# -- verify ----------------------------------------------------------------------

def test_verify_example(capsys):
    code, out, _ = run(["verify", "--suite", "holder", "--trials", "1000", "--atoms", "4",
                        "--dim", "3", "--seed", "42"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["suite"] == "holder" and rep["trials"] == 1000
    assert rep["failures"] == [] and rep["wall_time"] is None
    assert rep["max_abs_slack"] >= 0


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_every_suite_passes_and_is_deterministic(suite, capsys):
    argv = ["verify", "--suite", suite, "--trials", "20", "--atoms", "2", "--dim", "2", "--seed", "3"]
    code, a, _ = run(argv, capsys)
    assert code == 0, a
    code, b, _ = run(argv, capsys)
    assert a == b


def test_verify_complex_field(capsys):
    code, out, _ = run(["verify", "--suite", "riesz", "--trials", "50", "--field", "complex"], capsys)
    assert code == 0


def test_verify_out_file(tmp_path, capsys):
    dest = tmp_path / "rep.json"
    code, out, _ = run(["verify", "--suite", "modulus", "--trials", "10", "--out", str(dest)], capsys)
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["suite"] == "modulus"


def test_verify_impossible_tolerance_fails(capsys):
    code, out, _ = run(["verify", "--suite", "opnorm", "--trials", "20", "--tol", "1e-300"], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["failures"]
    f = rep["failures"][0]
    assert {"seed", "instance", "observed", "expected", "slack"} <= set(f)


def test_timing_flag(capsys):
    code, out, _ = run(["verify", "--suite", "modulus", "--trials", "5", "--timing"], capsys)
    assert code == 0 and json.loads(out)["wall_time"] >= 0


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "nosuch"],
    ["verify"],
    ["verify", "--suite", "holder", "--trials", "0"],
    ["verify", "--suite", "holder", "--trials", "many"],
    ["verify", "--suite", "holder", "--seed", "-1"],
    ["verify", "--suite", "holder", "--tol", "-1"],
    ["verify", "--suite", "holder", "--field", "quaternion"],
    ["gen", "nosuch"],
    ["compute", "nosuch", "-"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "error" in err


# -- gen -------------------------------------------------------------------------

def test_gen(capsys):
    code, a, _ = run(["gen", "gram", "--dim", "3", "--atoms", "2", "--seed", "1"], capsys)
    assert code == 0
    G = lio.gram_from_json(json.loads(a))
    assert G.dim == 3 and G.G.n == 2
    code, b, _ = run(["gen", "gram", "--dim", "3", "--atoms", "2", "--seed", "1"], capsys)
    assert a == b
    code, out, _ = run(["gen", "lscalar", "--field", "real", "--atoms", "4"], capsys)
    assert json.loads(out)["im"] == [0.0] * 4
    code, _, _ = run(["gen", "sublinear", "--field", "complex"], capsys)
    assert code == 2


# -- compute ---------------------------------------------------------------------

def test_compute_normalise(tmp_path, capsys):
    lam = S(3 + 4j, 0, -2)
    code, out, _ = run(["compute", "normalise", _write(tmp_path, "l.json", {"lambda": lam})], capsys)
    assert code == 0
    got = lio.scalar_from_json(json.loads(out)["n_lambda"])
    assert got.allclose(S(0.6 + 0.8j, 0, -1), rtol=1e-15)
    # the bare encoding emitted by gen is accepted too
    code, out, _ = run(["compute", "normalise", _write(tmp_path, "b.json", lam)], capsys)
    assert code == 0


def test_compute_riesz(tmp_path, capsys):
    a = V([[1.0, -2.0], [0.5, 3.0]])
    obj = {"phi": M(a.data[:, None, :]), "G": {"G": M(np.broadcast_to(np.eye(2), (2, 2, 2)).copy())},
           "constructive": True}
    code, out, _ = run(["compute", "riesz", _write(tmp_path, "r.json", obj)], capsys)
    assert code == 0
    res = json.loads(out)
    assert lio.vector_from_json(res["f"]).allclose(a, rtol=1e-12)
    assert lio.vector_from_json(res["f_constructive"]).allclose(a, rtol=1e-9, atol=1e-12)


def test_compute_opnorm_stdin(capsys, monkeypatch):
    T = M([[[2.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [0.0, 3.0]]])
    code, out, _ = run(["compute", "opnorm", "-"], capsys, stdin=lio.dumps({"T": T}), monkeypatch=monkeypatch)
    assert code == 0
    assert lio.scalar_from_json(json.loads(out)["norm"]).allclose(S(2.0, 3.0), rtol=1e-12)


def test_compute_other_tasks(tmp_path, capsys):
    x = V([[1.0, 0.0], [3.0, 4.0]])
    code, out, _ = run(["compute", "norm", _write(tmp_path, "n.json", {"x": x})], capsys)
    assert code == 0 and lio.scalar_from_json(json.loads(out)["norm"]) == S(1.0, 5.0)
    obj = {"x": x, "M": [V([[1.0, 1.0], [1.0, 1.0]])]}
    code, out, _ = run(["compute", "project", _write(tmp_path, "p.json", obj)], capsys)
    assert code == 0
    assert lio.vector_from_json(json.loads(out)["Px"]).allclose(V([[0.5, 0.5], [3.5, 3.5]]), rtol=1e-12)
    obj = {"lambda": S(0.75, 5.0), "n": 2}
    code, out, _ = run(["compute", "freudenthal", _write(tmp_path, "f.json", obj)], capsys)
    assert code == 0 and lio.scalar_from_json(json.loads(out)["lambda_n"]) == S(0.75, 2.0)
    T = M([[[1.0, 2j], [0.0, 1.0]]])
    code, out, _ = run(["compute", "adjoint", _write(tmp_path, "a.json", {"T": T})], capsys)
    assert code == 0
    assert lio.matrix_from_json(json.loads(out)["T_star"]).allclose(T.conj_transpose(), rtol=1e-12)


def test_compute_hb_extend(tmp_path, capsys):
    # domain L e1, phi(e1) = 1, sigma = ||.||_1, extend along e2: interval [-1, 1]
    sigma = {"psis": [], "norm_mu": S(1.0), "norm_p": 1.0}
    obj = {"sigma": sigma, "basis": [V([[1.0, 0.0]])], "values": [S(1.0)],
           "z": V([[0.0, 1.0]]), "rho_rule": "lower"}
    code, out, _ = run(["compute", "hb-extend", _write(tmp_path, "h.json", obj)], capsys)
    assert code == 0, out
    res = json.loads(out)
    assert lio.scalar_from_json(res["eta"]).allclose(S(-1.0), atol=1e-9)
    assert lio.scalar_from_json(res["xi"]).allclose(S(1.0), atol=1e-9)
    assert lio.scalar_from_json(res["rho"]).allclose(S(-1.0), atol=1e-9)
    obj = {"sigma": sigma, "dim": 2}
    code, out, _ = run(["compute", "hb-extend", _write(tmp_path, "t.json", obj)], capsys)
    assert code == 0
    obj["rho_rule"] = "eta"
    code, _, _ = run(["compute", "hb-extend", _write(tmp_path, "t.json", obj)], capsys)
    assert code == 2


@pytest.mark.parametrize("text,code", [
    ("{not json", 2),
    ("[1, 2]", 2),
    ('{"y": 1}', 2),
    ('{"x": {"atoms": 1, "dim": 2}}', 2),
    ('{"x": {"atoms": 2, "dim": 1, "entries": [{"atoms": 1, "re": [1.0]}]}}', 1),
])
def test_compute_bad_input(tmp_path, capsys, text, code):
    p = tmp_path / "bad.json"
    p.write_text(text)
    got, _, err = run(["compute", "norm", str(p)], capsys)
    assert got == code
    assert err


def test_compute_missing_file(capsys):
    code, _, err = run(["compute", "norm", "/nonexistent/input.json"], capsys)
    assert code == 2 and "cannot read" in err


def test_riesz_dimension_mismatch(tmp_path, capsys):
    obj = {"phi": M([[[1.0, 2.0]]]), "G": {"G": M([[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]])}}
    code, _, _ = run(["compute", "riesz", _write(tmp_path, "r.json", obj)], capsys)
    assert code == 1


def test_console_script_and_module():
    out = subprocess.run([sys.executable, "-m", "lfa", "verify", "--suite", "nosuch"],
                         capture_output=True, text=True)
    assert out.returncode == 2
    a = subprocess.run(["lfa", "verify", "--suite", "freudenthal", "--trials", "30", "--seed", "9"],
                       capture_output=True, text=True)
    b = subprocess.run([sys.executable, "-m", "lfa", "verify", "--suite", "freudenthal", "--trials", "30",
                        "--seed", "9"], capture_output=True, text=True)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
