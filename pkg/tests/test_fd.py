import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import observed_orders
from nldirac.fd import DerivativeOperator, diff, effective_wavenumber
from nldirac.grid import Grid1D, Grid2D


def test_grid_spacing_conventions():
    assert Grid1D(10, 0, 1, periodic=True).spacing == pytest.approx(0.1)
    assert Grid1D(11, 0, 1).spacing == pytest.approx(0.1)
    g = Grid1D(11, 0, 1)
    np.testing.assert_allclose(g.refined(2).points[::2], g.points)
    with pytest.raises(ValueError):
        Grid1D(16, 0.0, 1.0, kind="radial-r")
    with pytest.raises(ValueError):
        Grid1D(4, 0, 1)


def test_polar_grid_closed_and_spacing():
    g = Grid2D.polar(32, (0.5, 4.0), 24)
    assert g.closed and g.coords == "cylindrical"
    assert g.min_spacing == pytest.approx(min(3.5 / 31, 0.5 * 2 * np.pi / 24))
    sector = Grid2D.polar(32, (0.5, 4.0), 24, (0, np.pi))
    assert not sector.closed


@pytest.mark.parametrize("order", [2, 4])
def test_periodic_plane_wave_symbol(order):
    g = Grid1D(64, 0, 2 * np.pi, periodic=True)
    x = g.points
    for q in (1, 3, 7):
        d = diff(np.exp(1j * q * x), g.spacing, order=order)
        np.testing.assert_allclose(d, 1j * effective_wavenumber(q, g.spacing, order) * np.exp(1j * q * x), atol=1e-12)


@pytest.mark.parametrize("order", [2, 4])
def test_periodic_convergence(order):
    errs = []
    for n in (32, 64, 128):
        g = Grid1D(n, 0, 2 * np.pi, periodic=True)
        x = g.points
        f = np.exp(np.sin(x))
        errs.append(np.max(np.abs(diff(f, g.spacing, order=order) - np.cos(x) * f)))
    assert np.all(observed_orders(errs) > order - 0.2)


def test_one_sided_edges_fourth_order():
    errs = []
    for n in (33, 65, 129):
        g = Grid1D(n, 0.3, 2.0)
        x = g.points
        errs.append(np.max(np.abs(diff(np.sin(3 * x), g.spacing, order=4, boundary="one-sided") - 3 * np.cos(3 * x))))
    assert np.all(observed_orders(errs) > 3.5)


@given(st.integers(8, 40), st.sampled_from([2, 4]))
def test_dirichlet_stencil_is_skew(n, order):
    # the discrete operator is antisymmetric, so the free flow conserves the norm
    eye = np.eye(n)
    d = diff(eye, 1.0, axis=0, order=order, boundary="dirichlet")
    np.testing.assert_allclose(d, -d.T, atol=1e-15)


def test_antiperiodic_wrap():
    g = Grid1D(48, 0, 2 * np.pi, kind="azimuthal-theta", periodic=True)
    th = g.points
    f = np.exp(0.5j * th)  # changes sign across the wrap
    d = diff(f, g.spacing, order=4, boundary="antiperiodic")
    np.testing.assert_allclose(d, 0.5j * f, atol=1e-6)


def test_gradient_on_2d_and_1d():
    op = DerivativeOperator(4)
    g = Grid2D.cartesian(32, 48, (0, 2 * np.pi), (0, 2 * np.pi))
    x, y = g.mesh()
    dx, dy = op.gradient(np.sin(x) * np.cos(2 * y), g)
    np.testing.assert_allclose(dx, np.cos(x) * np.cos(2 * y), atol=1e-3)
    np.testing.assert_allclose(dy, -2 * np.sin(x) * np.sin(2 * y), atol=2e-3)
    d1, d2 = op.gradient(np.ones(16), Grid1D(16, 0, 1))
    assert d2 is None and np.allclose(d1, 0)


def test_bad_arguments():
    with pytest.raises(ValueError):
        DerivativeOperator(3)
    with pytest.raises(ValueError):
        diff(np.ones(10), 0.1, boundary="reflect")
