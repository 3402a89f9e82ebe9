import time

import numpy as np
import pytest

from nldirac import oracles
from nldirac.grid import Grid1D
from nldirac.models import ModelSpec
from nldirac.odesolve import IvpProblem, integrate, oracle_deviation, seeded_problem
from nldirac.reductions import reduce


def test_zero_field_gives_constant_profile():
    # eq7 massless, eps = 0: F vanishes identically
    res = integrate(IvpProblem(reduce(ModelSpec("eq7"), 0.0), 0.0, 2.0, (0.3 + 0.1j, -0.2j)))
    assert res.reason == "reached-end"
    np.testing.assert_allclose(res.profile.chi_plus, 0.3 + 0.1j, atol=1e-14)


@pytest.mark.parametrize("row, s0, s1", [(4, 0.5, 3.0), (2, 0.25, 4.0), (1, 0.05, 2.3), (3, 0.5, 5.0)])
def test_oracle_reproduction(row, s0, s1):
    res = integrate(seeded_problem(row, s0, s1))
    assert res.reason == "reached-end"
    assert oracle_deviation(res, row) <= 1e-6


def test_pole_detected_for_row1():
    res = integrate(seeded_problem(1, 0.05, 4.0))
    assert res.reason == "pole-detected"
    pole = oracles.singular_points(1, upto=np.inf)[1]
    assert abs(res.s_reached - pole) < 1e-3


@pytest.mark.parametrize("row", [2, 4])
def test_tolerance_monotonicity(row):
    lo, hi = oracles.TABLE1[row].probe_interval
    devs = []
    for k in range(4):
        tol = 2.0**-k
        res = integrate(seeded_problem(row, lo, hi, atol=1e-8 * tol, rtol=1e-6 * tol))
        devs.append(oracle_deviation(res, row))
    assert all(b <= a for a, b in zip(devs, devs[1:])), devs


def test_runtime_budget():
    t = time.perf_counter()
    for row, s0, s1 in ((1, 0.05, 2.3), (2, 0.25, 4.0), (4, 0.5, 3.0)):
        integrate(seeded_problem(row, s0, s1))
    assert time.perf_counter() - t < 5.0


def test_profile_grid_is_dense_output():
    res = integrate(seeded_problem(4, 0.5, 3.0), n_out=51)
    assert isinstance(res.profile.grid, Grid1D) and res.profile.grid.n == 51
