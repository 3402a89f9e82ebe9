import numpy as np
import pytest

from nldirac.models import COUPLING_NAMES, ModelSpec
from nldirac.scaling import scale_check


def spec(eq, m=0.0):
    return ModelSpec(eq, m, {k: 0.5 + 0.25 * i for i, k in enumerate(COUPLING_NAMES[eq])})


@pytest.mark.parametrize("eq", ["eq7", "eq8a", "eq8b", "eq12", "eq5", "eq10", "eq13"])
@pytest.mark.parametrize("lam", [2.0, 1 / 3])
def test_conformal_models_covariant(eq, lam):
    rep = scale_check(spec(eq), lam)
    assert rep.covariant and rep.max_mismatch <= 1e-10 and rep.expected_covariant


def test_identity_scaling_exact():
    assert scale_check(spec("eq9"), 1.0).max_mismatch == 0.0


@pytest.mark.parametrize("lam", [2.0, 1 / 3])
def test_eq9_breaks_by_cubic_margin(lam):
    rep = scale_check(spec("eq9"), lam)
    assert not rep.covariant
    assert rep.cubic_margin > 1e-3
    assert rep.max_mismatch >= rep.cubic_margin * (1 - 1e-9)


@pytest.mark.parametrize("eq", ["eq7", "eq12"])
def test_mass_breaks_and_is_attributed(eq):
    rep = scale_check(spec(eq, m=0.8), 2.0)
    assert not rep.covariant and rep.attributed_to_mass
    assert rep.residual_after_mass <= 1e-10
    assert scale_check(spec(eq, m=0.0), 2.0).covariant


def test_report_dict():
    d = scale_check(spec("eq7"), 2.0).as_dict()
    assert d["model"] == "eq7" and d["covariant"] is True and np.isfinite(d["max_mismatch"])
