"""PT / eta inner products, Gram matrices, gauge identity."""

import numpy as np
import pytest

import conftest as shared
import etaqm as q
from etaqm import inner, expr
from etaqm import operators as ops
from etaqm.errors import DimensionError, ParameterError, ZeroPseudoNormError


def test_even_gaussian_reproduces_l2_norm():
    g = q.make_grid(10.0, 501)
    u = np.exp(-g.points**2).astype(complex)
    got = inner.weighted_inner(g, np.ones(g.N), u, u)
    exact = np.sqrt(np.pi / 2)  # integral of exp(-2 x^2)
    assert got.imag == pytest.approx(0.0, abs=1e-14)
    assert got.real == pytest.approx(exact, rel=1e-8)


def test_even_times_odd_integrand_vanishes():
    g = q.make_grid(10.0, 500)
    even = np.exp(-g.points**2).astype(complex)
    odd = (g.points * np.exp(-g.points**2)).astype(complex)
    val = inner.weighted_inner(g, np.ones(g.N), even, odd)
    assert abs(val) <= 1e-12


def test_pt_orthogonality_of_b1_bound_states():
    # distinct real eigenvalues force PT-orthogonality of eigenvectors
    vecs = shared.bound_vectors("special-b1", 2.0, 0.0, 800, (-4.0, -1.0))
    g = shared.grid(800)
    w = np.ones(g.N)
    v0, _ = inner.pseudo_normalize(g, w, vecs[0])
    v1, _ = inner.pseudo_normalize(g, w, vecs[1])
    assert abs(inner.weighted_inner(g, w, v0, v1)) <= 1e-6


def test_pt_gram_of_b1_fixture():
    vecs = shared.bound_vectors("special-b1", 2.0, 0.0, 800, (-4.0, -1.0, -0.25))
    g = shared.grid(800)
    G = inner.gram(g, np.ones(g.N), vecs)
    off = np.max(np.abs(G - np.diag(np.diag(G))))
    assert off <= 1e-6
    # pseudo-norm signs survive on the diagonal
    for d in np.diag(G):
        assert abs(abs(d) - 1.0) <= 1e-10
        assert abs(d.imag) <= 1e-8


def test_gauged_gram_needs_the_gauge_weight():
    # the central contrast: sech-weight Gram is diagonal, unit-weight is not
    vecs = shared.bound_vectors("special-b1", 2.0, 0.0, 1600, (-4.0, -1.0, -0.25),
                                beta=shared.GAUGE_BETA, accuracy=4)
    g = shared.grid(1600)
    G = inner.gram(g, shared.exact_gauge_weight(1600), vecs)
    off = np.max(np.abs(G - np.diag(np.diag(G))))
    assert off <= 1e-6
    Gpt = inner.gram(g, np.ones(g.N), vecs)
    offpt = np.max(np.abs(Gpt - np.diag(np.diag(Gpt))))
    assert offpt >= 1e-2  # O(1) in practice; reported by the acceptance suite


def test_single_vector_gram_is_sign():
    g = q.make_grid(8.0, 301)
    u = np.exp(-g.points**2).astype(complex)
    G = inner.gram(g, np.ones(g.N), [u])
    assert G.shape == (1, 1)
    assert G[0, 0] == pytest.approx(1.0)


def test_self_orthogonal_state_raises():
    g = q.make_grid(10.0, 400)
    w = np.ones(g.N)
    e = np.exp(-g.points**2)
    o = g.points * np.exp(-g.points**2)
    A = float((inner.weighted_inner(g, w, e.astype(complex), e.astype(complex))).real)
    B = float((inner.weighted_inner(g, w, o.astype(complex), o.astype(complex))).real)
    v = e / np.sqrt(A) + 1j * o / np.sqrt(-B)  # odd part has negative pseudo-norm
    with pytest.raises(ZeroPseudoNormError):
        inner.gram(g, w, [v])


def test_gauge_identity_is_algebraic():
    # <u1,u2>_{exp(-2 b F)} equals the unit-weight product of gauged samples
    g = shared.grid(800)
    F = ops.gauge_antiderivative(g, expr.parse("tanh(x)"))
    beta = shared.GAUGE_BETA
    rng = np.random.default_rng(7)
    u1 = rng.normal(size=g.N) + 1j * rng.normal(size=g.N)
    u2 = rng.normal(size=g.N) + 1j * rng.normal(size=g.N)
    lhs = inner.weighted_inner(g, np.exp(-2 * beta * F), u1, u2)
    gf = np.exp(-beta * F)
    rhs = inner.weighted_inner(g, np.ones(g.N), gf * u1, gf * u2)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_conjugate_pair_states_report_mutual_product():
    # beyond the reality bound the pair members pair with each other:
    # report their mutual eta-product (nonzero) without asserting magnitude
    rep = shared.eig_full("scarf2-raw", 2.0, 3.0, 800)
    vals = rep.eigenvalues
    i = int(np.argmin(np.abs(vals - (-0.2294 - 0.5592j))))
    j = int(np.argmin(np.abs(vals - (-0.2294 + 0.5592j))))
    assert i != j
    g = shared.grid(800)
    w = np.ones(g.N)
    u, v = rep.vectors[:, i], rep.vectors[:, j]
    mutual = inner.weighted_inner(g, w, u / np.linalg.norm(u), v / np.linalg.norm(v))
    assert abs(mutual) > 1e-8  # pair members are not mutually orthogonal


def test_weight_must_be_real():
    g = q.make_grid(4.0, 50)
    u = np.ones(50, dtype=complex)
    with pytest.raises(ParameterError):
        inner.weighted_inner(g, (1 + 0.5j) * np.ones(50), u, u)


def test_grid_mismatch_rejected():
    g = q.make_grid(4.0, 50)
    with pytest.raises(DimensionError):
        inner.weighted_inner(g, np.ones(50), np.ones(49, dtype=complex), np.ones(50, dtype=complex))
    with pytest.raises(DimensionError):
        inner.operator_inner(g, np.eye(49, dtype=complex), np.ones(50), np.ones(50))


def test_operator_inner_reduces_to_weighted_form():
    # diagonal eta matrix reproduces the multiplicative path exactly
    g = q.make_grid(6.0, 200)
    w = 1 / np.cosh(g.points)
    eta = np.diag(w).astype(complex)
    rng = np.random.default_rng(3)
    u1 = rng.normal(size=g.N) + 1j * rng.normal(size=g.N)
    u2 = rng.normal(size=g.N) + 1j * rng.normal(size=g.N)
    a = inner.operator_inner(g, eta, u1, u2)
    b = inner.weighted_inner(g, w, u1, u2)
    assert a == pytest.approx(b, rel=1e-13)
