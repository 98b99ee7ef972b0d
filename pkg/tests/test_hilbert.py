import numpy as np
import pytest

from helpers import S, V
from lfa import oracle
from lfa.errors import FieldError, ParallelogramViolation, ShapeError
from lfa.generate import gram, idempotent, lmatrix, lscalar, lvector, rng_for
from lfa.hilbert import (GramForm, adjoint, cauchy_schwarz_gap, gram_norm, gram_operator_norm,
                         inner, orth_decompose, polarize, project_box, project_submodule,
                         realize_support, recover_gram, riesz_constructive, riesz_direct,
                         span_support)
from lfa.normed import NormSpec, norm
from lfa.scalar import AtomSpace, Idempotent, LScalar, local_solve, pseudo_inverse, support
from lfa.vectors import LMatrix, LVector, apply, compose, functional, mask

FIELDS = ("real", "complex")


def _gram_normfn(G):
    return lambda v: gram_norm(v, G)


def test_gram_invariants():
    with pytest.raises(ValueError):
        GramForm(LMatrix([[[1.0, 2.0], [0.0, 1.0]]]))
    with pytest.raises(ValueError):
        GramForm(LMatrix([[[1.0, 0.0], [0.0, -1.0]]]))
    G = gram(rng_for(1), 3, 4, "complex")
    assert np.all(G.min_eig > 1e-10)
    assert np.allclose(G.G.data, np.conj(np.swapaxes(G.G.data, 1, 2)), atol=1e-12)


def test_inner_examples():
    sp = AtomSpace(2)
    e1, e2 = LVector.basis(sp, 2, 0), LVector.basis(sp, 2, 1)
    assert inner(e1, e2) == S(0.0, 0.0)


@pytest.mark.parametrize("field", FIELDS)
def test_inner_axioms(field):
    rng = rng_for(2)
    for _ in range(100):
        G = gram(rng, 3, 3, field)
        x, y = lvector(rng, 3, 3, field, zero_prob=0.2), lvector(rng, 3, 3, field)
        lam = lscalar(rng, 3, field)
        xx = inner(x, x, G)
        assert np.all(np.abs(np.imag(xx.values)) <= 1e-9 * (1 + np.abs(xx.values)))
        assert np.all(np.real(xx.values) >= -1e-12)
        zero = np.all(x.data == 0, axis=1)
        assert np.all((np.real(xx.values) > 0) | zero)
        assert inner(x.scale(lam), y, G).allclose(lam * inner(x, y, G), rtol=1e-9, atol=1e-9)
        assert inner(y, x, G).allclose(inner(x, y, G).conj(), rtol=1e-9, atol=1e-9)
        for w in range(3):
            assert inner(x, y, G).values[w] == pytest.approx(
                complex(np.conj(y.data[w]) @ G.G.data[w] @ x.data[w]), rel=1e-12, abs=1e-12)


def test_shape_mismatch():
    G = gram(rng_for(0), 2, 3)
    with pytest.raises(ShapeError):
        inner(V([[1.0, 0.0], [0.0, 1.0]]), V([[1.0, 0.0], [0.0, 1.0]]), G)


def test_cauchy_schwarz_examples():
    x = V([[1.0, 2.0], [0.0, 3.0]])
    assert cauchy_schwarz_gap(x, x.scale(2.0)).allclose(S(0.0, 0.0), atol=1e-12)
    sp = AtomSpace(2)
    e1, e2 = LVector.basis(sp, 2, 0), LVector.basis(sp, 2, 1)
    assert cauchy_schwarz_gap(e1, e2) == gram_norm(e1) * gram_norm(e2)


@pytest.mark.parametrize("field", FIELDS)
def test_cauchy_schwarz_definite_and_semidefinite(field):
    rng = rng_for(3)
    for _ in range(200):
        A = lmatrix(rng, 3, 2, 4, field).data  # rank-deficient A^H A on a 4-dim module
        semi = GramForm(LMatrix(np.conj(np.swapaxes(A, 1, 2)) @ A, field=field), definite=False)
        for G in (gram(rng, 3, 4, field), semi):
            x, y = lvector(rng, 3, 4, field), lvector(rng, 3, 4, field)
            gap = cauchy_schwarz_gap(x, y, G).values
            assert np.all(gap >= -1e-12 * (1 + gram_norm(x, G).values * gram_norm(y, G).values))


@pytest.mark.parametrize("field", FIELDS)
def test_parallelogram_pythagoras_polarization(field):
    rng = rng_for(4)
    for _ in range(50):
        G = gram(rng, 3, 3, field)
        nf = _gram_normfn(G)
        x, y = lvector(rng, 3, 3, field), lvector(rng, 3, 3, field)
        sq = lambda v: nf(v).values ** 2  # noqa: E731
        lhs, rhs = sq(x + y) + sq(x - y), 2 * sq(x) + 2 * sq(y)
        assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)
        assert polarize(nf, x, y).allclose(inner(x, y, G), rtol=1e-9, atol=1e-9)
        assert polarize(nf, x, x).allclose(LScalar(sq(x), field=field), rtol=1e-12)
        assert recover_gram(nf, x.space, 3, field).allclose(G.G, rtol=1e-9, atol=1e-9)
        # Pythagoras for the G-orthogonal part of y
        _, r = project_submodule(y, [x], G)
        assert np.allclose(sq(x + r), sq(x) + sq(r), rtol=1e-9, atol=1e-9)


def test_polarization_additive_and_homogeneous():
    rng = rng_for(5)
    G = gram(rng, 2, 3)
    nf = _gram_normfn(G)
    x, x2, y = lvector(rng, 2, 3), lvector(rng, 2, 3), lvector(rng, 2, 3)
    lam = lscalar(rng, 2)
    assert polarize(nf, x + x2, y).allclose(polarize(nf, x, y) + polarize(nf, x2, y), rtol=1e-9, atol=1e-9)
    assert polarize(nf, x.scale(lam), y).allclose(lam * polarize(nf, x, y), rtol=1e-9, atol=1e-9)


def test_real_converse_pythagoras():
    # real field: ||x+y||^2 = ||x||^2 + ||y||^2 forces <x, y> = 0
    rng = rng_for(6)
    G = gram(rng, 2, 3)
    x = lvector(rng, 2, 3)
    _, y = project_submodule(lvector(rng, 2, 3), [x], G)
    assert inner(x, y, G).allclose(S(0.0, 0.0), atol=1e-9)


def test_p1_norm_rejected():
    sp = AtomSpace(1)
    l1 = lambda v: norm(v, NormSpec("p", 1))  # noqa: E731
    e1, e2 = LVector.basis(sp, 2, 0), LVector.basis(sp, 2, 1)
    # classically ||e1+e2||^2 + ||e1-e2||^2 = 8 while 2||e1||^2 + 2||e2||^2 = 4
    assert oracle.norm_p([1, 1], 1) ** 2 + oracle.norm_p([1, -1], 1) ** 2 == 8
    with pytest.raises(ParallelogramViolation):
        polarize(l1, e1, e2)


# -- projections ---------------------------------------------------------------

def test_projection_examples():
    x = V([[1.0, 0.0]])
    Px, r = project_submodule(x, [V([[1.0, 1.0]])])
    assert Px.allclose(V([[0.5, 0.5]]), rtol=1e-12)
    m = V([[2.0, -1.0], [0.0, 3.0]])
    Px, r = project_submodule(m.scale(S(3.0, -2.0)), [m])
    assert Px.allclose(m.scale(S(3.0, -2.0)), rtol=1e-12, atol=1e-12)
    assert np.allclose(r.data, 0.0, atol=1e-12)


@pytest.mark.parametrize("field", FIELDS)
def test_projection_orthogonality_optimality(field):
    rng = rng_for(7)
    for _ in range(50):
        G = gram(rng, 3, 4, field)
        k = int(rng.integers(1, 4))
        M = [mask(lvector(rng, 3, 4, field), idempotent(rng, 3, 0.7)) for _ in range(k)]
        x = lvector(rng, 3, 4, field)
        Px, r = project_submodule(x, M, G)
        scale = 1 + gram_norm(x, G).values
        for g in M:
            assert np.all(np.abs(inner(r, g, G).values) <= 1e-9 * scale * (1 + gram_norm(g, G).values))
        d0 = gram_norm(r, G).values
        for _ in range(50):
            c = rng.standard_normal((k, 3)) + (1j * rng.standard_normal((k, 3)) if field == "complex" else 0)
            m = LVector(sum(c[i][:, None] * g.data for i, g in enumerate(M)), field=field)
            assert np.all(gram_norm(x - m, G).values - d0 >= -1e-9 * scale)
        for w in range(3):
            ref, _ = oracle.project_ls(x.data[w], [g.data[w] for g in M], G.G.data[w])
            assert np.allclose(Px.data[w], ref, rtol=1e-8, atol=1e-8 * scale[w])


@pytest.mark.parametrize("field", FIELDS)
def test_orth_decompose_properties(field):
    rng = rng_for(8)
    for _ in range(30):
        G = gram(rng, 2, 4, field)
        M = [lvector(rng, 2, 4, field) for _ in range(int(rng.integers(1, 4)))]
        dec = orth_decompose(M, G)
        P = dec.projector
        assert compose(P, P).allclose(P, rtol=1e-9, atol=1e-9)
        x = lvector(rng, 2, 4, field)
        assert gram_norm(apply(P, x), G).le(gram_norm(x, G), slack=1e-9)
        for q in dec.perp_generators():
            assert np.allclose(apply(P, q).data, 0.0, atol=1e-9)
            for g in M:
                assert np.allclose(inner(q, g, G).values, 0.0, atol=1e-9 * (1 + gram_norm(g, G).values.max()))
        Q = dec.complement_projector
        assert (apply(P, x) + apply(Q, x)).allclose(x, rtol=1e-12, atol=1e-12)


def test_orth_decompose_e1():
    sp = AtomSpace(2)
    e = [LVector.basis(sp, 3, k) for k in range(3)]
    dec = orth_decompose([e[0]])
    assert list(dec.rank) == [1, 1]
    perp = dec.perp_generators()
    assert len(perp) == 2
    for q in perp:
        assert np.allclose(q.data[:, 0], 0.0)


def test_project_box():
    a = V([[0.0, 0.0], [0.0, -1.0]])
    b = V([[1.0, 1.0], [2.0, 1.0]])
    inside = V([[0.5, 0.25], [1.0, 0.0]])
    assert project_box(inside, a, b) == inside
    assert project_box(V([[5.0, 5.0], [5.0, 5.0]]), a, b) == b
    with pytest.raises(ValueError):
        project_box(inside, b, a)
    with pytest.raises(FieldError):
        z = LVector(np.ones((2, 2)), field="complex")
        project_box(z, a.as_field("complex"), b.as_field("complex"))
    rng = rng_for(9)
    for _ in range(50):
        x = LVector(3 * rng.standard_normal((2, 2)))
        p = project_box(x, a, b)
        d0 = norm(x - p).values
        for _ in range(50):
            t = rng.random((2, 2))
            m = LVector(a.data + t * (b.data - a.data))
            assert np.all(norm(x - m).values >= d0 - 1e-12)


def test_realize_support_examples():
    sp = AtomSpace(3)
    g = mask(LVector.basis(sp, 2, 0), Idempotent([0, 1, 0]))
    z = realize_support([g])
    assert gram_norm(z).allclose(S(0.0, 1.0, 0.0), atol=1e-12)
    full = realize_support([LVector.basis(sp, 2, 0), LVector.basis(sp, 2, 1)])
    assert gram_norm(full).allclose(S(1.0, 1.0, 1.0), rtol=1e-12)


@pytest.mark.parametrize("field", FIELDS)
def test_realize_support_random(field):
    rng = rng_for(10)
    for _ in range(50):
        G = gram(rng, 4, 3, field)
        M = [mask(lvector(rng, 4, 3, field), idempotent(rng, 4, 0.5)) for _ in range(2)]
        z = realize_support(M, G, x_template=M[0])
        assert gram_norm(z, G).allclose(span_support(M).as_scalar(), rtol=1e-9, atol=1e-12)


# -- Riesz -----------------------------------------------------------------------

def test_riesz_examples():
    a = V([[1.0, -2.0, 0.5], [0.0, 3.0, 1.0]])
    phi = functional(a)
    assert riesz_direct(phi).allclose(a, rtol=1e-12)
    assert riesz_constructive(phi).allclose(a, rtol=1e-9, atol=1e-12)
    zero = functional(LVector.zeros(a.space, 3))
    assert riesz_direct(zero) == LVector.zeros(a.space, 3)
    assert np.allclose(riesz_constructive(zero).data, 0.0)
    e1 = functional(LVector.basis(a.space, 3, 0, "complex").scale(1j))
    f = riesz_constructive(e1)
    assert f.allclose(riesz_direct(e1), rtol=1e-9, atol=1e-12)
    assert np.allclose(np.abs(f.data[:, 0]), 1.0)


@pytest.mark.parametrize("field", FIELDS)
def test_riesz_direct_equals_constructive(field):
    rng = rng_for(11)
    for _ in range(100):
        atoms, d = 3, int(rng.integers(1, 5))
        G = gram(rng, atoms, d, field)
        a = mask(lvector(rng, atoms, d, field), idempotent(rng, atoms, 0.7))
        phi = functional(a)
        f = riesz_direct(phi, G)
        g = riesz_constructive(phi, G)
        assert f.allclose(g, rtol=1e-9, atol=1e-9)
        assert support(gram_norm(f, G)) == support(norm(a))
        for k in range(d):
            h = LVector.basis(a.space, d, k, field)
            assert inner(h, f, G).allclose(phi(h), rtol=1e-9, atol=1e-9)
        for w in range(atoms):
            ref = oracle.riesz_solve(a.data[w], G.G.data[w])
            assert np.allclose(f.data[w], ref, rtol=1e-8, atol=1e-9)


def test_regularity_chain():
    rng = rng_for(12)
    for _ in range(100):
        lam = LScalar(rng.standard_normal(4) * (rng.random(4) < 0.7))
        mu = LScalar(rng.standard_normal(4))
        kappa, pi = pseudo_inverse(lam)
        assert (local_solve(lam, mu, pi) * lam).allclose(pi * mu, rtol=1e-12, atol=1e-12)


# -- adjoints ----------------------------------------------------------------

def test_adjoint_identity_gram():
    rng = rng_for(13)
    T = lmatrix(rng, 2, 3, 2, "complex")
    assert adjoint(T).allclose(T.conj_transpose(), rtol=1e-12)
    q, _ = np.linalg.qr(rng.standard_normal((2, 3, 3)) + 1j * rng.standard_normal((2, 3, 3)))
    U = LMatrix(q)
    assert compose(adjoint(U), U).allclose(LMatrix.identity(U.space, 3, "complex"), atol=1e-12)


@pytest.mark.parametrize("field", FIELDS)
def test_adjoint_properties(field):
    rng = rng_for(14)
    for _ in range(100):
        r, c = (int(v) for v in rng.integers(1, 4, size=2))
        Gi, Go = gram(rng, 3, c, field), gram(rng, 3, r, field)
        T = lmatrix(rng, 3, r, c, field)
        Ts = adjoint(T, Gi, Go)
        for i in range(c):
            x = LVector.basis(T.space, c, i, field)
            for j in range(r):
                y = LVector.basis(T.space, r, j, field)
                assert inner(apply(T, x), y, Go).allclose(inner(x, apply(Ts, y), Gi), rtol=1e-9, atol=1e-9)
        assert adjoint(Ts, Go, Gi).allclose(T, rtol=1e-8, atol=1e-8)
        lam = lscalar(rng, 3, field)
        assert adjoint(T.scale(lam), Gi, Go).allclose(Ts.scale(lam.conj()), rtol=1e-9, atol=1e-9)
        nT = gram_operator_norm(T, Gi, Go)
        assert gram_operator_norm(Ts, Go, Gi).allclose(nT, rtol=1e-9)
        assert gram_operator_norm(compose(Ts, T), Gi, Gi).allclose(nT * nT, rtol=1e-9)
        for w in range(3):
            assert np.allclose(Ts.data[w], oracle.adjoint(T.data[w], Gi.G.data[w], Go.G.data[w]),
                               rtol=1e-8, atol=1e-8)
