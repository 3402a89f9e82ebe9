"""Initial-value integration of reduced profile systems."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import oracles
from .grid import Grid1D
from .reductions import ReducedProfile, ReducedSystem

POLE_THRESHOLD = 1e8


@dataclass(frozen=True)
class IvpProblem:
    system: ReducedSystem
    s_start: float
    s_end: float
    seed: tuple
    atol: float = 1e-10
    rtol: float = 1e-8
    method: str = "DOP853"
    pole_threshold: float = POLE_THRESHOLD


@dataclass
class IvpResult:
    profile: ReducedProfile | None
    reason: str  # reached-end | pole-detected | step-underflow | failed
    s_reached: float
    message: str = ""
    solution: object = None

    @property
    def ok(self):
        return self.reason == "reached-end"


def _rhs(system):
    def f(s, y):
        dp, dm = system.derivative(np.array([s]), y[:1], y[1:])
        return np.concatenate([dp, dm])
    return f


def integrate(problem: IvpProblem, n_out: int = 201) -> IvpResult:
    """Adaptive embedded Runge-Kutta from the seed, sampled on a uniform grid.

    Integration halts when ``|chi|`` crosses the pole threshold or the step
    size underflows; the profile then covers only the part actually reached.
    """
    sys_ = problem.system
    y0 = np.asarray(problem.seed, dtype=complex)

    def pole(s, y):
        return np.max(np.abs(y)) - problem.pole_threshold

    pole.terminal = True
    pole.direction = 1

    with np.errstate(all="ignore"):
        sol = solve_ivp(
            _rhs(sys_), (problem.s_start, problem.s_end), y0,
            method=problem.method, atol=problem.atol, rtol=problem.rtol,
            dense_output=True, events=pole,
        )
    if sol.status == 1:
        reason = "pole-detected"
    elif sol.status == 0:
        reason = "reached-end"
    elif "step size" in sol.message.lower():
        reason = "step-underflow"
    else:
        reason = "failed"
    s_reached = float(sol.t[-1])
    profile = None
    if abs(s_reached - problem.s_start) > 0 and sol.sol is not None:
        lo, hi = sorted((problem.s_start, s_reached))
        if n_out >= 8 and hi > lo:
            grid = Grid1D(n_out, lo, hi, kind="radial-r" if sys_.cylindrical else "cartesian-x")
            y = sol.sol(grid.points)
            profile = ReducedProfile(grid, y[0], y[1], sys_.epsilon, sys_.wavenumber)
    if reason == "step-underflow":
        message = f"step size underflow at s={s_reached:.12g}"
    else:
        message = sol.message
    return IvpResult(profile, reason, s_reached, message, sol)


def oracle_deviation(result: IvpResult, row: int, constants=None, assignment=None, cap=1e6):
    """Max |chi - oracle| over the reached profile, skipping points where the
    oracle itself exceeds ``cap`` (the approach to a pole)."""
    if result.profile is None:
        return float("nan")
    s = result.profile.grid.points
    assignment = assignment or oracles.TABLE1[row].default_assignment
    ref_p, ref_m, _, _ = oracles.assign(oracles.evaluate(row, s, constants, check=False), assignment)
    keep = (np.abs(ref_p) < cap) & (np.abs(ref_m) < cap) & np.isfinite(ref_p) & np.isfinite(ref_m)
    if not np.any(keep):
        return float("nan")
    dev = np.maximum(np.abs(result.profile.chi_plus - ref_p), np.abs(result.profile.chi_minus - ref_m))
    return float(np.max(dev[keep]))


def seeded_problem(row, s_start, s_end, constants=None, assignment=None, **kw) -> IvpProblem:
    """IVP seeded from one point of a closed-form row."""
    assignment = assignment or oracles.TABLE1[row].default_assignment
    cp, cm, _, _ = oracles.assign(oracles.evaluate(row, s_start, constants), assignment)
    return IvpProblem(oracles.system_for(row, constants), float(s_start), float(s_end),
                      (complex(cp), complex(cm)), **kw)
