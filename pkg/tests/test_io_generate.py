import json

import numpy as np
import pytest

from helpers import S
from lfa import io as lio
from lfa.errors import ShapeError
from lfa.generate import KINDS, gram, generate, idempotent, lmatrix, lscalar, lvector, rng_for, sublinear
from lfa.hilbert import GramForm
from lfa.lp import LpElement
from lfa.normed import INF, NormSpec


def _roundtrip(obj, decode):
    return decode(json.loads(lio.dumps(obj)))


@pytest.mark.parametrize("field", ("real", "complex"))
def test_roundtrips(field):
    rng = rng_for(1)
    for _ in range(20):
        lam = lscalar(rng, 3, field, zero_prob=0.3)
        assert _roundtrip(lam, lio.scalar_from_json) == lam
        x = lvector(rng, 3, 2, field)
        assert _roundtrip(x, lio.vector_from_json) == x
        T = lmatrix(rng, 3, 2, 4, field)
        assert _roundtrip(T, lio.matrix_from_json) == T
        pi = idempotent(rng, 3)
        assert _roundtrip(pi, lio.idempotent_from_json) == pi
        G = gram(rng, 3, 2, field)
        assert _roundtrip(G, lio.gram_from_json).G == G.G
    f = LpElement(("a", "b"), INF, {"a": x, "b": x.scale(2.0)})
    g = _roundtrip(f, lio.lp_from_json)
    assert g.p == INF and g.S == f.S and g.allclose(f, rtol=0, atol=0)
    spec = NormSpec("weighted", 3.0, weights=(S(1.0, 2.0, 3.0), S(0.5, 0.5, 0.5)))
    back = _roundtrip(spec, lio.normspec_from_json)
    assert back.kind == "weighted" and back.p == 3.0 and back.weights[0] == spec.weights[0]
    sigma = sublinear(rng, 3, 2)
    sb = _roundtrip(sigma, lio.sublinear_from_json)
    assert len(sb.psis) == len(sigma.psis) and sb.norm_mu == sigma.norm_mu


def test_decode_errors():
    with pytest.raises(lio.DecodeError):
        lio.loads("{not json")
    with pytest.raises(lio.DecodeError):
        lio.scalar_from_json({"atoms": 2})
    with pytest.raises(lio.DecodeError):
        lio.scalar_from_json([1, 2])
    with pytest.raises(lio.DecodeError):
        lio.scalar_from_json({"atoms": 1, "re": [1.0], "im": [2.0], "field": "real"})
    with pytest.raises(lio.DecodeError):
        lio.scalar_from_json({"atoms": 1, "re": [1.0], "field": "quaternion"})
    with pytest.raises(lio.DecodeError):
        lio.idempotent_from_json({"atoms": 2, "bits": [1, 2]})
    with pytest.raises(lio.DecodeError):
        lio.normspec_from_json({"kind": "p", "p": "huge"})
    with pytest.raises(ShapeError):
        lio.scalar_from_json({"atoms": 3, "re": [1.0, 2.0]})
    with pytest.raises(ShapeError):
        lio.vector_from_json({"atoms": 1, "dim": 2, "entries": [{"atoms": 1, "re": [1.0]}]})


def test_dumps_canonical():
    x = lvector(rng_for(0), 2, 2)
    text = lio.dumps({"b": x, "a": [np.float64(1.5), np.int64(3), INF, 1 + 2j, np.bool_(True)]})
    assert text.endswith("\n")
    obj = json.loads(text)
    assert list(obj) == ["a", "b"]
    assert obj["a"] == [1.5, 3, "inf", {"re": 1.0, "im": 2.0}, True]
    with pytest.raises(ValueError):
        lio.dumps(float("nan"))


@pytest.mark.parametrize("kind", KINDS)
def test_generate_deterministic(kind):
    a = lio.dumps(generate(kind, seed=5, atoms=3, dim=2))
    b = lio.dumps(generate(kind, seed=5, atoms=3, dim=2))
    c = lio.dumps(generate(kind, seed=6, atoms=3, dim=2))
    assert a == b and a != c


def test_generate_invariants():
    G = generate("gram", seed=1, atoms=2, dim=3)
    assert isinstance(G, GramForm)
    GramForm(G.G)  # definiteness and Hermitian checks run in the constructor
    assert np.all(np.linalg.eigvalsh(G.G.data) >= 1e-3 - 1e-9)
    Gc = generate("gram", seed=1, atoms=2, dim=3, field="complex")
    assert np.allclose(Gc.G.data, np.conj(np.swapaxes(Gc.G.data, 1, 2)))
    lam = generate("lscalar", seed=2, atoms=5, field="real")
    assert lam.field == "real" and np.all(np.imag(lam.values) == 0)
    assert lio.to_json(lam)["im"] == [0.0] * 5


def test_generate_bad_params():
    with pytest.raises(ValueError):
        generate("nosuch")
    with pytest.raises(ValueError):
        generate("lvector", atoms=0)
    with pytest.raises(ValueError):
        generate("sublinear", field="complex")


def test_positive_and_sparse_draws():
    rng = rng_for(3)
    lam = lscalar(rng, 200, positive=True)
    assert np.all(lam.values > 0)
    x = lvector(rng, 200, 2, zero_prob=0.5)
    # entries are dropped independently
    frac = np.mean(x.data == 0)
    assert 0.4 < frac < 0.6
