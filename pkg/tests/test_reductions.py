import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nldirac import models, oracles, studies
from nldirac.fd import DerivativeOperator
from nldirac.grid import Grid1D, Grid2D
from nldirac.models import ModelSpec
from nldirac.reductions import (
    QuantizationError,
    ReducedProfile,
    UnsupportedModel,
    dispersion_determinant,
    free_energy_root,
    lift,
    reduce,
    reduced_residual,
)
from nldirac.spinor import PhiState, compute_couplings


@pytest.mark.parametrize("eq", ["eq5", "eq8a", "eq8b", "eq9", "eq11a", "eq11b"])
def test_non_separable_models_rejected(eq):
    with pytest.raises(UnsupportedModel, match="separate"):
        reduce(ModelSpec(eq), 1.0)


def test_free_pair():
    sys = reduce(ModelSpec("eq7", 0.6), 0.9)
    s = np.array([0.3])
    cp, cm, dp, dm = np.array([1.2 + 0.1j]), np.array([0.4j]), np.array([0.5]), np.array([-0.3 + 1j])
    rp, rm = sys.residual_at(s, cp, cm, dp, dm)
    # eps chi+ = m chi+ + chi-' ;  eps chi- = -chi+' - m chi-
    assert rp[0] == pytest.approx(0.9 * cp[0] - (0.6 * cp[0] + dm[0]))
    assert rm[0] == pytest.approx(0.9 * cm[0] - (-dp[0] - 0.6 * cm[0]))


def test_eq12_row4_reduction_form():
    m, a = 1.3, 0.7
    sys = reduce(ModelSpec("eq12", m, {"alpha_plus": a}), m)
    rng = np.random.default_rng(0)
    cp, cm, dp, dm = (rng.normal(size=3) + 1j * rng.normal(size=3) for _ in range(4))
    rp, rm = sys.residual_at(np.zeros(3), cp, cm, dp, dm)
    np.testing.assert_allclose(rp, -(a * abs(cp) * cp + dm), atol=1e-14)
    np.testing.assert_allclose(rm, 2 * m * cm - (-dp + a * abs(cm) * cm), atol=1e-14)


def test_eq13_row1_reduction_form():
    bp, bm = 0.8, 1.4
    sys = reduce(ModelSpec("eq13", 0.0, {"beta_plus": bp, "beta_minus": bm}), 0.0)
    r = np.array([0.5, 2.0])
    cp, cm = np.array([0.3 + 0.2j, 1.0]), np.array([0.7, -0.4j])
    dp, dm = np.array([0.1, 0.2j]), np.array([1.0j, 0.5])
    rp, rm = sys.residual_at(r, cp, cm, dp, dm)
    b = (bp * abs(cp) + bm * abs(cm)) / np.sqrt(r)
    np.testing.assert_allclose(rp, -(dm + b * cm), atol=1e-14)
    np.testing.assert_allclose(rm, -(-dp + b * cp), atol=1e-14)


def test_reduced_residual_examples():
    g = Grid1D(32, 0.5, 3.0)
    z = np.zeros(g.n, complex)
    sys = reduce(ModelSpec("eq7"), 0.0)
    assert reduced_residual(sys, ReducedProfile(g, z, z), (z, z)) == 0.0
    rng = np.random.default_rng(2)
    rand = ReducedProfile(g, rng.normal(size=g.n) + 0j, rng.normal(size=g.n) + 0j)
    assert reduced_residual(sys, rand) > 0
    row4 = oracles.profile(4, Grid1D(64, 0.5, 5.0))
    sys4 = oracles.system_for(4)
    _, _, dp, dm = oracles.evaluate(4, row4.grid.points)
    assert reduced_residual(sys4, row4, (dp, dm)) <= 1e-10


def test_lift_examples():
    g = Grid1D(16, 0.0, 1.0)
    z = np.zeros(g.n, complex)
    grid = Grid2D(g, Grid1D(12, 0.0, 2 * np.pi, periodic=True))
    zero = lift(ReducedProfile(g, z, z, 0.4, 1.0), ModelSpec("eq7"), grid, 0.7)
    assert not np.any(zero.plus)
    real = np.linspace(1, 2, g.n) + 0j
    st0 = lift(ReducedProfile(g, real, 2 * real), ModelSpec("eq7"), grid, 5.0)
    assert np.array_equal(st0.plus, np.repeat(real[:, None], 12, axis=1))


def test_kappa_quantization():
    g = Grid1D(16, 1.0, 2.0, kind="radial-r")
    z = np.ones(g.n, complex)
    closed = Grid2D(g, Grid1D(16, 0, 2 * np.pi, kind="azimuthal-theta", periodic=True))
    with pytest.raises(QuantizationError):
        lift(ReducedProfile(g, z, z, 0.0, 1.0), ModelSpec("eq13"), closed)
    sector = Grid2D(g, Grid1D(16, 0, 1.0, kind="azimuthal-theta"))
    assert isinstance(lift(ReducedProfile(g, z, z, 0.0, 0.3), ModelSpec("eq13"), sector), PhiState)
    assert isinstance(lift(ReducedProfile(g, z, z, 0.0, -2.5), ModelSpec("eq13"), closed), PhiState)


@pytest.mark.parametrize("eq", sorted(studies.LIFT_CASES))
def test_phase_cancellation_on_lift(eq):
    case = studies.LIFT_CASES[eq]
    cyl = eq in ("eq10", "eq13")
    g = Grid1D(20, *case["bounds"], kind="radial-r" if cyl else "cartesian-x")
    cyc = Grid1D(16, 0, 2 * np.pi, kind="azimuthal-theta" if cyl else "cartesian-x", periodic=True)
    cp, cm, _, _ = studies._lift_profile(g.points)
    st_ = lift(ReducedProfile(g, cp, cm, 0.7, case["wavenumber"]), ModelSpec(eq), Grid2D(g, cyc), 0.9)
    for f in compute_couplings(st_).as_tuple():
        assert np.max(np.abs(f - f[:, :1])) <= 1e-12


@pytest.mark.parametrize("eq", sorted(studies.LIFT_CASES))
def test_reduction_lift_consistency(eq):
    errs, orders = studies.lift_study(eq)
    assert np.all(orders >= 3.5), (errs, orders)


def test_row4_lift_on_fine_grid():
    c = {"m": 1.0, "alpha_plus": 1.0}
    spec, eps = oracles.model_for(4, c)
    res = []
    for n in (201, 401, 801):
        g = Grid1D(n, 0.5, 3.0)
        prof = oracles.profile(4, g, c)
        grid = Grid2D(g, Grid1D(8, 0, 2 * np.pi, periodic=True))
        st_ = lift(prof, spec, grid, 0.2)
        r = models.residual(spec, st_, (-1j * eps * st_.plus, -1j * eps * st_.minus), DerivativeOperator(4))
        # interior: the biased edge rows carry a larger error constant
        res.append(max(np.max(np.abs(r[0][2:-2])), np.max(np.abs(r[1][2:-2]))))
    assert res[-1] <= 1e-8
    assert np.log2(res[0] / res[1]) > 3.5


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_free_dispersion(m, q, k):
    sys = reduce(ModelSpec("eq7", m), 0.0, k)
    eps = np.sqrt(m * m + q * q + k * k)
    assert abs(dispersion_determinant(sys, q, eps)) <= 1e-12 * max(1.0, eps**2)
    if eps > 1e-3:
        assert abs(free_energy_root(sys, q) ** 2 - eps**2) <= 1e-12 * max(1.0, eps**2)
        assert abs(dispersion_determinant(sys, q, 1.1 * eps)) > 1e-6 * eps**2
