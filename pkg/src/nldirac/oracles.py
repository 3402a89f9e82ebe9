"""Closed-form stationary solutions with exact derivatives (rows 1-4).

Row  Model  Fixed parameters                       Amplitudes
1    eq13   m = eps = 0, alpha_+- = 0, kappa = 0    c sqrt(b-/b+) tan(a sqrt r), c sqrt(b+/b-) cot(a sqrt r),
                                                    a = 2 c sqrt(b+ b-)
2    eq13   m = eps = 0, alpha_+ = 0, beta = 0      c1 c2 E/(1 + c2 E), c1/(1 + c2 E),  E = exp(2 c1 alpha_- sqrt r)
3    eq7    alpha_S = alpha_V = 0, eps = m, k = 0   -3/(2 sqrt(2m) alpha_W x^1.5), -3 sqrt(m)/(2 sqrt 2 alpha_W x^0.5)
4    eq12   eps = m, k = 0, beta = 0, alpha_- = 0   3 m^2 x/(alpha_+ D), 3 m/(alpha_+ D),  D = 1 + m^3 x^3

Row 1's printed argument ``2c sqrt(b+ b- r)`` is read with the root covering
``r``.  The alternative ``2c sqrt(b+ b-) r`` is kept as ``reading="linear-r"``
so that its failure stays under test.

The amplitudes enter the equations through ``|chi|``, so each row holds only
where both amplitudes have the sign the derivation assumes.  Those sign
conditions define the domains below.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .models import ModelSpec
from .reductions import ReducedProfile, ReducedSystem, reduce

ASSIGNMENTS = ("as-printed", "swapped")
RESIDUAL_TOL = 1e-10


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class AnalyticSolution:
    row: int
    equation: str
    constraints: str
    defaults: dict
    probe_interval: tuple
    default_assignment: str = "as-printed"

    def constants(self, overrides=None):
        c = dict(self.defaults)
        for key, value in (overrides or {}).items():
            if key not in c:
                raise KeyError(f"row {self.row} has no constant {key!r}; expected {sorted(c)}")
            c[key] = float(value)
        return c


TABLE1 = {
    1: AnalyticSolution(1, "eq13", "m = eps = 0, alpha_+- = 0, gamma_+- = 0",
                        {"c": 0.5, "beta_plus": 1.0, "beta_minus": 1.0}, (0.05, 2.3)),
    2: AnalyticSolution(2, "eq13", "m = eps = 0, alpha_+ = 0, beta_+- = 0, gamma_+- = 0",
                        {"c1": 1.0, "c2": 2.0, "alpha_minus": 1.5}, (0.1, 4.0)),
    3: AnalyticSolution(3, "eq7", "alpha_S = alpha_V = 0, eps = m, k = 0",
                        {"m": 1.0, "alpha_w": 1.0}, (0.5, 5.0), default_assignment="swapped"),
    4: AnalyticSolution(4, "eq12", "eps = m, k = 0, beta_+- = 0, alpha_- = 0",
                        {"m": 1.0, "alpha_plus": 1.0}, (0.5, 5.0)),
}


def model_for(row: int, constants=None) -> tuple[ModelSpec, float]:
    """Model and energy fixed by a row's parameter constraints."""
    c = TABLE1[row].constants(constants)
    if row == 1:
        return ModelSpec("eq13", 0.0, {"beta_plus": c["beta_plus"], "beta_minus": c["beta_minus"]}), 0.0
    if row == 2:
        return ModelSpec("eq13", 0.0, {"alpha_minus": c["alpha_minus"]}), 0.0
    if row == 3:
        return ModelSpec("eq7", c["m"], {"alpha_w": c["alpha_w"]}), c["m"]
    return ModelSpec("eq12", c["m"], {"alpha_plus": c["alpha_plus"]}), c["m"]


def system_for(row: int, constants=None) -> ReducedSystem:
    model, eps = model_for(row, constants)
    return reduce(model, eps, 0.0)


# -- domains -------------------------------------------------------------------

def _row1_argument_scale(c, reading):
    a = 2 * c["c"] * np.sqrt(c["beta_plus"] * c["beta_minus"])
    return a, (np.sqrt if reading == "root-r" else (lambda r: r))


def _check_positive(c, names, row):
    for name in names:
        if not c[name] > 0:
            raise DomainError(f"row {row} needs {name} > 0, got {c[name]}")


def singular_points(row, constants=None, reading="root-r", upto=10.0):
    """Points where the amplitudes blow up or the row's sign conditions flip."""
    c = TABLE1[row].constants(constants)
    if row == 1:
        a, _ = _row1_argument_scale(c, reading)
        z = np.arange(0, 64) * np.pi / (2 * a)
        pts = z**2 if reading == "root-r" else z
        return [float(p) for p in pts if p <= upto]
    if row == 4:
        return [-1.0 / c["m"], 0.0]
    return [0.0]


def check_domain(row, s, constants=None, reading="root-r"):
    c = TABLE1[row].constants(constants)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if row == 1:
        _check_positive(c, ("c", "beta_plus", "beta_minus"), row)
        a, g = _row1_argument_scale(c, reading)
        with np.errstate(invalid="ignore"):
            arg = np.mod(a * g(np.where(s > 0, s, np.nan)), np.pi)
        ok = (s > 0) & (arg > 0) & (arg < np.pi / 2)
    elif row == 2:
        _check_positive(c, ("c1", "c2"), row)
        ok = s > 0
    elif row == 3:
        _check_positive(c, ("m", "alpha_w"), row)
        ok = s > 0
    else:
        _check_positive(c, ("m", "alpha_plus"), row)
        ok = s > 0
    if not np.all(ok):
        bad = float(s[~ok][0])
        pts = singular_points(row, c, reading, upto=max(10.0, 2 * abs(bad)))
        nearest = min(pts, key=lambda p: abs(p - bad))
        raise DomainError(f"row {row}: s={bad} outside the validity domain (nearest singular point {nearest:.6g})")


# -- amplitudes ------------------------------------------------------------------

def evaluate(row, s, constants=None, reading="root-r", check=True):
    """Amplitudes and exact derivatives ``(f+, f-, f+', f-')`` at ``s``."""
    c = TABLE1[row].constants(constants)
    if check:
        check_domain(row, s, c, reading)
    s = np.asarray(s, dtype=float)
    if row == 1:
        bp, bm, cc = c["beta_plus"], c["beta_minus"], c["c"]
        a = 2 * cc * np.sqrt(bp * bm)
        if reading == "root-r":
            arg, darg = a * np.sqrt(s), a / (2 * np.sqrt(s))
        elif reading == "linear-r":
            arg, darg = a * s, a
        else:
            raise ValueError(f"unknown reading {reading!r}")
        kp, km = cc * np.sqrt(bm / bp), cc * np.sqrt(bp / bm)
        t = np.tan(arg)
        return kp * t, km / t, kp * (1 + t**2) * darg, -km * (1 + 1 / t**2) * darg
    if row == 2:
        c1, c2, am = c["c1"], c["c2"], c["alpha_minus"]
        e = c2 * np.exp(2 * c1 * am * np.sqrt(s))
        de = e * c1 * am / np.sqrt(s)
        fp, fm = c1 * e / (1 + e), c1 / (1 + e)
        return fp, fm, c1 * de / (1 + e) ** 2, -c1 * de / (1 + e) ** 2
    if row == 3:
        m, aw = c["m"], c["alpha_w"]
        kp = -3 / (2 * np.sqrt(2 * m) * aw)
        km = -3 * np.sqrt(m) / (2 * np.sqrt(2) * aw)
        return kp * s**-1.5, km * s**-0.5, -1.5 * kp * s**-2.5, -0.5 * km * s**-1.5
    m, ap = c["m"], c["alpha_plus"]
    d = 1 + m**3 * s**3
    dd = 3 * m**3 * s**2
    fp, fm = 3 * m**2 * s / (ap * d), 3 * m / (ap * d)
    return fp, fm, 3 * m**2 * (d - s * dd) / (ap * d**2), -3 * m * dd / (ap * d**2)


def assign(values, assignment):
    """Map ``(f+, f-, f+', f-')`` to ``(chi+, chi-, chi+', chi-')``."""
    fp, fm, dfp, dfm = values
    if assignment == "as-printed":
        return fp, fm, dfp, dfm
    if assignment == "swapped":
        return fm, fp, dfm, dfp
    raise ValueError(f"unknown assignment {assignment!r}")


def profile(row, grid, constants=None, assignment=None, reading="root-r") -> ReducedProfile:
    sol = TABLE1[row]
    assignment = assignment or sol.default_assignment
    cp, cm, _, _ = assign(evaluate(row, grid.points, constants, reading), assignment)
    _, eps = model_for(row, constants)
    return ReducedProfile(grid, cp, cm, eps, 0.0)


def relative_residual(system: ReducedSystem, s, values):
    """Pointwise reduced residual scaled by ``max(1, local amplitude/slope)``."""
    cp, cm, dcp, dcm = values
    rp, rm = system.residual_at(s, cp, cm, dcp, dcm)
    scale = np.maximum.reduce([np.ones_like(s), np.abs(cp), np.abs(cm), np.abs(dcp), np.abs(dcm)])
    return np.maximum(np.abs(rp), np.abs(rm)) / scale


@dataclass
class VerificationReport:
    row: int
    equation: str
    max_residual: float
    assignment_used: str
    passed: bool
    residual_by_assignment: dict = field(default_factory=dict)
    probes: tuple = ()
    constants: dict = field(default_factory=dict)
    reading: str = "root-r"

    def as_dict(self):
        return {
            "row": self.row,
            "model": self.equation,
            "max_residual": self.max_residual,
            "assignment_used": self.assignment_used,
            "pass": self.passed,
            "residual_by_assignment": dict(self.residual_by_assignment),
            "domain_probed": [min(self.probes), max(self.probes)] if self.probes else [],
            "n_probes": len(self.probes),
            "constants": dict(self.constants),
            "reading": self.reading,
        }


def default_probes(row, n=7, constants=None, reading="root-r"):
    lo, hi = TABLE1[row].probe_interval
    if row == 1:
        first_pole = singular_points(row, constants, reading, upto=np.inf)[1]
        lo, hi = 0.02 * first_pole, 0.93 * first_pole
    return tuple(float(s) for s in np.linspace(lo, hi, n))


def verify_row(row, constants=None, probes=None, reading="root-r", tol=RESIDUAL_TOL) -> VerificationReport:
    """Residual verdict for one row under both component assignments."""
    c = TABLE1[row].constants(constants)
    probes = tuple(default_probes(row, constants=c, reading=reading) if probes is None else (float(p) for p in probes))
    if len(probes) < 5:
        raise ValueError("need at least 5 probe points")
    s = np.asarray(probes)
    values = evaluate(row, s, c, reading)
    system = system_for(row, c)
    by = {a: float(np.max(relative_residual(system, s, assign(values, a)))) for a in ASSIGNMENTS}
    best = min(ASSIGNMENTS, key=lambda a: (by[a], a != TABLE1[row].default_assignment))
    return VerificationReport(row, TABLE1[row].equation, by[best], best, by[best] <= tol, by, probes, c, reading)
