"""Mesh construction and finite-difference matrix checks."""

import numpy as np
import pytest

from etaqm import diff_matrix, make_grid
from etaqm.errors import ParameterError
from etaqm.grid import fornberg_weights


def test_make_grid_examples():
    g = make_grid(1.0, 3)
    assert g.h == pytest.approx(0.5)
    np.testing.assert_allclose(g.points, [-0.5, 0.0, 0.5])

    g = make_grid(10.0, 999)
    assert g.h == pytest.approx(0.02)
    assert g.points[0] == pytest.approx(-9.98)


def test_make_grid_rejects_bad_parameters():
    with pytest.raises(ParameterError):
        make_grid(1.0, 2)
    with pytest.raises(ParameterError):
        make_grid(0.0, 100)
    with pytest.raises(ParameterError):
        make_grid(-3.0, 100)


@pytest.mark.parametrize("N", [8, 9, 400, 401])
def test_grid_symmetry_is_exact(N):
    g = make_grid(7.3, N)
    assert np.all(np.diff(g.points) > 0)
    np.testing.assert_array_equal(g.points, -g.points[::-1])
    assert g.h * (N + 1) == pytest.approx(2 * 7.3, rel=1e-15)


def test_fornberg_reproduces_classic_stencils():
    w = fornberg_weights(0.0, np.array([-1.0, 0.0, 1.0]), 2)
    np.testing.assert_allclose(w, [1.0, -2.0, 1.0], atol=1e-13)
    w = fornberg_weights(0.0, np.array([-2.0, -1.0, 0.0, 1.0, 2.0]), 1)
    np.testing.assert_allclose(w, [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12], atol=1e-13)


def test_center_row_of_small_second_derivative():
    g = make_grid(1.0, 3)  # h = 0.5
    D2 = diff_matrix(g, 2, 2)
    np.testing.assert_allclose(D2[1].real, [4.0, -8.0, 4.0], atol=1e-12)


def test_first_derivative_interior_row_sums_vanish():
    g = make_grid(5.0, 64)
    D1 = diff_matrix(g, 1, 2)
    sums = D1.sum(axis=1)
    assert np.max(np.abs(sums[1:-1])) < 1e-12


def test_interior_stencil_symmetry():
    g = make_grid(5.0, 64)
    D1 = diff_matrix(g, 1, 2)
    D2 = diff_matrix(g, 2, 2)
    inner = slice(2, -2)
    np.testing.assert_allclose(D1[inner, inner], -D1[inner, inner].T, atol=1e-12)
    np.testing.assert_allclose(D2[inner, inner], D2[inner, inner].T, atol=1e-12)


def test_parity_symmetry_is_exact():
    g = make_grid(6.0, 81)
    for order, sign in ((1, -1.0), (2, 1.0)):
        for acc in (2, 4):
            D = diff_matrix(g, order, acc)
            np.testing.assert_array_equal(D, sign * D[::-1, ::-1])


def test_sine_mode_second_derivative():
    L, N = 8.0, 800
    g = make_grid(L, N)
    k = np.pi / (2 * L)
    f = np.sin(k * (g.points + L))  # vanishes at both walls
    D2 = diff_matrix(g, 2, 2)
    err = np.max(np.abs((D2 @ f).real + k * k * f))
    assert err <= 10 * g.h**2  # C h^2 with a modest constant


@pytest.mark.parametrize("order,acc,lo,hi", [
    (1, 2, 3.0, 5.0), (2, 2, 3.0, 5.0),
    (1, 4, 10.0, 22.0), (2, 4, 10.0, 22.0),
])
def test_convergence_orders(order, acc, lo, hi):
    # doubling N shrinks the max interior error ~4x (acc 2) or ~16x (acc 4)
    L = 8.0
    errs = []
    for N in (400, 800):
        g = make_grid(L, N)
        x = g.points
        f = np.exp(-x * x)
        exact = (-2 * x) * f if order == 1 else (4 * x * x - 2) * f
        D = diff_matrix(g, order, acc)
        errs.append(np.max(np.abs((D @ f).real - exact)[4:-4]))
    ratio = errs[0] / errs[1]
    assert lo <= ratio <= hi


def test_diff_matrix_rejects_bad_orders():
    g = make_grid(1.0, 8)
    with pytest.raises(ParameterError):
        diff_matrix(g, 3, 2)
    with pytest.raises(ParameterError):
        diff_matrix(g, 1, 6)
