"""Numerical studies shared by the experiment scripts and the acceptance tests.

Each function returns plain numbers so callers can assert on them or print
them.  Grids and test data are fixed here so scripts and tests agree.
"""

from __future__ import annotations

import numpy as np

from . import models
from .evolve import Integrator, evolve, nonlinear_norm_rate, predicted_norm_rate, step
from .fd import DerivativeOperator, effective_wavenumber
from .grid import Grid1D, Grid2D
from .models import ModelSpec
from .reductions import ReducedProfile, lift, reduce
from .spinor import SpinorState, compute_couplings, norm
from .transforms import apply_gauge, gauge_phase, phi_from_psi


def observed_orders(errors, factor=2.0):
    e = np.asarray(errors, dtype=float)
    return np.log(e[:-1] / e[1:]) / np.log(factor)


# -- gauge elimination ------------------------------------------------------------

GAUGE_COUPLINGS = {"alpha_s": 0.4, "alpha_v": 0.7, "alpha_w": 0.5}


def _gauge_profile(x):
    # relative phase stays in (-pi, 0) on [0, 3], so the U radicand keeps one sign
    p = (1.0 + 0.3 * np.sin(2 * x)) * np.exp(0.4j * x)
    q = (0.7 + 0.2 * np.cos(x)) * np.exp(-0.6j)
    return p, q


def gauge_elimination_error(n, order=4, alpha_u=0.9, m=0.8, epsilon=0.6, x_bounds=(0.0, 3.0)):
    """Max |R5[gauged chi] - gauge * R7[chi]| for a y-independent state.

    The phase is integrated with a rule of the same order as the stencil,
    so the mismatch is pure discretization error.
    """
    grid = Grid1D(n, *x_bounds)
    chi = SpinorState(grid, *_gauge_profile(grid.points))
    phase = gauge_phase(compute_couplings(chi).u_tilde, grid, alpha_u, order=order)
    psi = apply_gauge(chi, phase)
    deriv = DerivativeOperator(order, edge="one-sided")
    eq5 = ModelSpec("eq5", m, {**GAUGE_COUPLINGS, "alpha_u": alpha_u})
    eq7 = ModelSpec("eq7", m, GAUGE_COUPLINGS)
    # stationary time dependence exp(-i eps t) on both sides
    r5 = models.residual(eq5, psi, (-1j * epsilon * psi.plus, -1j * epsilon * psi.minus), deriv)
    r7 = models.residual(eq7, chi, (-1j * epsilon * chi.plus, -1j * epsilon * chi.minus), deriv)
    g = phase.factor()
    return float(max(np.max(np.abs(r5[0] - g * r7[0])), np.max(np.abs(r5[1] - g * r7[1]))))


def gauge_study(ns=(33, 65, 129, 257), order=4):
    errs = [gauge_elimination_error(n, order) for n in ns]
    return errs, observed_orders(errs)


# -- reduction / lift consistency ---------------------------------------------------

LIFT_CASES = {
    "eq7": dict(m=0.8, couplings={"alpha_s": 0.3, "alpha_v": 0.5, "alpha_w": 0.4}, bounds=(0.0, 3.0), wavenumber=1.0),
    "eq12": dict(m=0.8, couplings={"alpha_plus": 0.3, "alpha_minus": 0.2, "beta_plus": 0.5, "beta_minus": 0.4},
                 bounds=(0.0, 3.0), wavenumber=1.0),
    "eq10": dict(m=0.8, couplings={"alpha_s": 0.3, "alpha_v": 0.5, "alpha_w": 0.4}, bounds=(1.0, 3.0), wavenumber=0.5),
    "eq13": dict(m=0.8, couplings={"alpha_plus": 0.3, "alpha_minus": 0.2, "beta_plus": 0.5, "beta_minus": 0.4},
                 bounds=(1.0, 3.0), wavenumber=1.5),
}
LIFT_EPSILON = 0.7
LIFT_TIME = 0.3


def _lift_profile(s):
    cp = 2.0 + 0.5 * np.sin(s) + 0.2j * np.cos(s)
    cm = 0.8 + 0.3 * np.cos(s) - 0.1j * s
    dp = 0.5 * np.cos(s) - 0.2j * np.sin(s)
    dm = -0.3 * np.sin(s) - 0.1j
    return cp, cm, dp, dm


def lift_consistency_error(eq, n, n_cyclic=None):
    """Max gap between the reduced residual (exact derivatives) and the 2D
    residual of the lifted state on the slice y = 0 (or theta = 0).

    The cyclic axis is refined with the profile axis unless ``n_cyclic`` is given.
    """
    n_cyclic = n - 1 if n_cyclic is None else n_cyclic
    case = LIFT_CASES[eq]
    model = ModelSpec(eq, case["m"], case["couplings"])
    cyl = model.coords == "cylindrical"
    kind = "radial-r" if cyl else "cartesian-x"
    axis = Grid1D(n, *case["bounds"], kind=kind)
    if cyl:
        cyc = Grid1D(n_cyclic, 0.0, 2 * np.pi, kind="azimuthal-theta", periodic=True)
    else:
        cyc = Grid1D(n_cyclic, 0.0, 2 * np.pi / case["wavenumber"], periodic=True)
    grid = Grid2D(axis, cyc)
    cp, cm, dp, dm = _lift_profile(axis.points)
    profile = ReducedProfile(axis, cp, cm, LIFT_EPSILON, case["wavenumber"])
    system = reduce(model, LIFT_EPSILON, case["wavenumber"])
    red = system.residual_at(axis.points, cp, cm, dp, dm)
    state = lift(profile, model, grid, LIFT_TIME)
    dt = (-1j * LIFT_EPSILON * state.plus, -1j * LIFT_EPSILON * state.minus)
    full = models.residual(model, state, dt, DerivativeOperator(4, edge="one-sided"))
    phase = np.exp(-1j * LIFT_EPSILON * LIFT_TIME)
    return float(max(np.max(np.abs(full[0][:, 0] / phase - red[0])),
                     np.max(np.abs(full[1][:, 0] / phase - red[1]))))


def lift_study(eq, ns=(17, 33, 65, 129)):
    errs = [lift_consistency_error(eq, n) for n in ns]
    return errs, observed_orders(errs)


# -- norm conservation -------------------------------------------------------------

CONSERVATION_COUPLINGS = {
    "eq5": {"alpha_s": 0.5, "alpha_v": 0.5, "alpha_u": 0.5, "alpha_w": 0.5},
    "eq7": {"alpha_s": 0.5, "alpha_v": 0.5, "alpha_w": 0.5},
    "eq8a": {"alpha_plus": 0.5, "alpha_minus": 0.5, "beta_plus": 0.5, "beta_minus": 0.5},
    "eq8b": {"alpha_plus": 0.5, "alpha_minus": 0.5, "beta_plus": 0.5, "beta_minus": 0.5},
    "eq9": {"alpha_plus": 0.5, "alpha_minus": 0.5, "alpha_w": 0.5},
    "eq12": {"alpha_plus": 0.5, "alpha_minus": 0.5, "beta_plus": 0.5, "beta_minus": 0.5},
}
CONSERVATION_COUPLINGS.update({
    "eq10": CONSERVATION_COUPLINGS["eq7"],
    "eq11a": CONSERVATION_COUPLINGS["eq8b"],
    "eq11b": CONSERVATION_COUPLINGS["eq8b"],
    "eq13": CONSERVATION_COUPLINGS["eq12"],
})
HERMITIAN_MODELS = ("eq5", "eq7", "eq8b", "eq9", "eq12", "eq10", "eq11a", "eq11b", "eq13")


def gaussian_state(n=64, half_width=5.0):
    grid = Grid2D.cartesian(n, n, (-half_width, half_width), (-half_width, half_width))
    x, y = grid.mesh()
    g = np.exp(-(x**2 + y**2) / 2)
    return SpinorState(grid, g * np.exp(0.5j * x), 0.5 * g * np.exp(0.3j + 0.4j * y))


def ring_state(nr=64, n_theta=64, r_bounds=(0.5, 8.0)):
    grid = Grid2D.polar(nr, r_bounds, n_theta)
    r, th = grid.mesh()
    g = np.exp(-2 * (r - 4.0) ** 2)  # negligible at both radial ends
    return phi_from_psi(SpinorState(grid, g * np.exp(1j * th), 0.5 * g * np.exp(0.3j)))


def conservation_run(eq, t_final=1.0, cfl=0.25, m=1.0):
    """Relative norm drift of an rk4 run; Cartesian runs are periodic 64^2,
    polar runs use a 64x64 disk annulus with zero ghosts at the radial ends."""
    spec = ModelSpec(eq, m, CONSERVATION_COUPLINGS[eq])
    state = ring_state() if spec.coords == "cylindrical" else gaussian_state()
    traj = evolve(spec, state, t_final, Integrator("rk4", cfl=cfl), DerivativeOperator(4, edge="dirichlet"),
                  sample_every=10)
    return traj.relative_norm_drift()


def eq8a_control(t_fit=0.05, t_final=1.0, cfl=0.1, n=64):
    """Negative control: eq8a loses norm at the predicted initial rate.

    Returns (predicted rate, fitted initial slope, |norm(t_final) - norm(0)|).
    """
    grid = Grid2D.cartesian(n, n, (-5, 5), (-5, 5))
    x, y = grid.mesh()
    g = 0.5 * np.exp(-(x**2 + y**2) / 2)
    state = SpinorState(grid, np.exp(0.25j * np.pi) * g, g)
    spec = ModelSpec("eq8a", 0.0, {"beta_plus": 1.0})
    deriv = DerivativeOperator(4, edge="dirichlet")
    predicted = nonlinear_norm_rate(spec, state)
    assert abs(predicted - predicted_norm_rate(spec, state, deriv)) < 1e-8 * max(1.0, abs(predicted))
    traj = evolve(spec, state, t_final, Integrator("rk4", cfl=cfl), deriv)
    t, nrm = traj.times, traj.norms
    sel = t <= t_fit + 1e-12
    slope = np.polyfit(t[sel], nrm[sel], 2)[1]
    return float(predicted), float(slope), float(abs(nrm[-1] - nrm[0]))


# -- free plane wave ------------------------------------------------------------------

def plane_wave_run(n=128, q=1, m=0.0, k=0.0, cfl=0.5, order=4):
    """Evolve a free plane wave for one period.

    Returns (epsilon of the discrete symbol, max amplitude drift, max phase error).
    """
    grid = Grid1D(n, 0.0, 2 * np.pi, periodic=True)
    qe = effective_wavenumber(q, grid.spacing, order)
    eps = np.sqrt(m * m + qe * qe + k * k)
    a, b = 1j * qe + k, eps - m
    nrm = np.hypot(abs(a), abs(b))
    wave = np.exp(1j * q * grid.points)
    state = SpinorState(grid, a / nrm * wave, b / nrm * wave, wavenumber=k)
    period = 2 * np.pi / eps
    traj = evolve(ModelSpec("eq7", m), state, period, Integrator("rk4", cfl=cfl), DerivativeOperator(order))
    amp0 = np.abs(state.plus)
    drift = max(float(np.max(np.abs(np.abs(s.plus) - amp0) + np.abs(np.abs(s.minus) - np.abs(state.minus))))
                for s in traj.states)
    final = traj.states[-1]
    phase_err = float(np.max(np.abs(final.plus - state.plus * np.exp(-1j * eps * period))))
    return float(eps), drift, phase_err


# -- space-time convergence -----------------------------------------------------------

def _smooth_periodic(grid):
    x = grid.points
    return SpinorState(grid, 1.0 + 0.3 * np.exp(1j * x), 0.5 + 0.2 * np.exp(-1j * x))


def evolution_convergence(ns=(32, 64, 128, 256), t_final=0.5, cfl=0.5):
    """rk4 + 4th-order stencil on a nonlinear eq12 run; errors against a
    Richardson-extrapolated reference on the coarsest grid's points."""
    spec = ModelSpec("eq12", 0.5, {"alpha_plus": 0.4, "alpha_minus": 0.2, "beta_plus": 0.3, "beta_minus": 0.1})
    finals = []
    for n in ns:
        grid = Grid1D(n, 0.0, 2 * np.pi, periodic=True)
        traj = evolve(spec, _smooth_periodic(grid), t_final, Integrator("rk4", cfl=cfl), DerivativeOperator(4),
                      sample_every=10**9)
        stride = n // ns[0]
        finals.append(np.concatenate([traj.states[-1].plus[::stride], traj.states[-1].minus[::stride]]))
    ref = finals[-1] + (finals[-1] - finals[-2]) / 15.0
    h0 = 2 * np.pi / ns[0]
    errs = [float(np.sqrt(h0 * np.sum(np.abs(f - ref) ** 2))) for f in finals[:-1]]
    return errs, observed_orders(errs)


def time_reversal_error(n=64, t_final=0.5, cfl=0.5):
    """Forward then backward rk4 in the linear limit; returns max |psi_end - psi_0|."""
    grid = Grid1D(n, 0.0, 2 * np.pi, periodic=True)
    state = _smooth_periodic(grid)
    spec = ModelSpec("eq7", 0.7)
    integ = Integrator("rk4", cfl=cfl)
    deriv = DerivativeOperator(4)
    dt = integ.step_size(grid)
    steps = int(round(t_final / dt))
    s = state
    for i in range(steps):
        s = step(spec, s, integ, deriv, dt, i)
    for i in range(steps):
        s = step(spec, s, integ, deriv, -dt, steps + i)
    return float(max(np.max(np.abs(s.plus - state.plus)), np.max(np.abs(s.minus - state.minus))))


def flow_scaling_mismatch(lam=2, n=64, half_width=6.0, t_final=0.5):
    """eq12 massless: evolving D psi0 for T/lam against D applied to the
    evolution of psi0 for T.  The dilated run uses the grid shrunk by lam,
    so both discrete problems share the point count and step count."""
    spec = ModelSpec("eq12", 0.0, {"alpha_plus": 0.5, "alpha_minus": 0.3, "beta_plus": 0.4, "beta_minus": 0.2})
    deriv = DerivativeOperator(4)
    base = Grid2D.cartesian(n, n, (-half_width, half_width), (-half_width, half_width))
    small = Grid2D.cartesian(n, n, (-half_width / lam, half_width / lam), (-half_width / lam, half_width / lam))
    x, y = base.mesh()
    g = np.exp(-(x**2 + y**2) / 2)
    p0, q0 = g * np.exp(0.5j * x), 0.6 * g * np.exp(0.2j)
    a = evolve(spec, SpinorState(base, p0, q0), t_final, Integrator("rk4", cfl=0.25), deriv, sample_every=10**9)
    b = evolve(spec, SpinorState(small, lam * p0, lam * q0), t_final / lam, Integrator("rk4", cfl=0.25), deriv,
               sample_every=10**9)
    fa, fb = a.states[-1], b.states[-1]
    return float(max(np.max(np.abs(lam * fa.plus - fb.plus)), np.max(np.abs(lam * fa.minus - fb.minus))))


def density_identity_gap(seed=0, nr=48, n_theta=40, r_bounds=(0.3, 5.0)):
    """Relative gap between int psi^dag psi r dr dtheta and int phi^dag phi dr dtheta."""
    rng = np.random.default_rng(seed)
    grid = Grid2D.polar(nr, r_bounds, n_theta)
    r, th = grid.mesh()
    c = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    modes = np.stack([np.ones_like(th), np.cos(th), np.sin(2 * th)])
    env = np.exp(-((r - rng.uniform(1, 4)) ** 2) / rng.uniform(0.5, 2))
    psi = SpinorState(grid, env * np.tensordot(c[0], modes, 1), env * np.tensordot(c[1], modes, 1))
    a, b = norm(psi), norm(phi_from_psi(psi))
    return abs(a - b) / abs(a)
