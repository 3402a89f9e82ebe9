"""Method-of-lines time integration with norm diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import RK45

from . import models
from .fd import DerivativeOperator
from .models import ModelSpec
from .spinor import SpinorState, norm


class EvolutionError(RuntimeError):
    """Non-finite field values appeared during a step."""

    def __init__(self, message, step_index, time):
        super().__init__(message)
        self.step_index = step_index
        self.time = time


@dataclass(frozen=True)
class Integrator:
    """``rk4`` uses a fixed step (``dt`` or ``cfl * min_spacing``); ``rk45``
    adapts between tolerances but never exceeds the CFL ceiling."""

    scheme: str = "rk4"
    dt: float | None = None
    cfl: float = 0.5
    atol: float = 1e-9
    rtol: float = 1e-7

    def __post_init__(self):
        if self.scheme not in ("rk4", "rk45"):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    def ceiling(self, grid) -> float:
        return self.cfl * grid.min_spacing

    def step_size(self, grid) -> float:
        ceiling = self.ceiling(grid)
        if self.dt is None:
            return ceiling
        if abs(self.dt) > ceiling * (1 + 1e-12):
            raise ValueError(f"dt={self.dt} exceeds the CFL ceiling {ceiling:.6g}")
        return self.dt


@dataclass(frozen=True)
class DiagnosticsRecord:
    time: float
    norm: float
    max_amplitude: float
    step_count: int
    dt_current: float


@dataclass
class Trajectory:
    states: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    truncated: bool = False

    @property
    def norms(self):
        return np.array([d.norm for d in self.diagnostics])

    @property
    def times(self):
        return np.array([d.time for d in self.diagnostics])

    def relative_norm_drift(self):
        n = self.norms
        return float(np.max(np.abs(n - n[0])) / n[0]) if n[0] else 0.0


def _pack(state):
    return np.concatenate([state.plus.ravel(), state.minus.ravel()])


def _unpack(y, like: SpinorState, time):
    half = y.size // 2
    shape = like.grid.shape
    return like.replace(plus=y[:half].reshape(shape), minus=y[half:].reshape(shape), time=time)


def _check_finite(state_or_arrays, step_index, time):
    arrays = state_or_arrays if isinstance(state_or_arrays, tuple) else (state_or_arrays,)
    if not all(np.all(np.isfinite(a)) for a in arrays):
        raise EvolutionError(f"non-finite field at step {step_index} (t={time:.6g})", step_index, time)


def step(model: ModelSpec, state: SpinorState, integrator: Integrator, deriv: DerivativeOperator,
         dt: float | None = None, step_index: int = 0) -> SpinorState:
    """One classical RK4 step.  ``dt`` may be negative for backward runs."""
    h = integrator.step_size(state.grid) if dt is None else dt
    if abs(h) > integrator.ceiling(state.grid) * (1 + 1e-12):
        raise ValueError(f"dt={h} exceeds the CFL ceiling")

    def f(s):
        with np.errstate(all="ignore"):
            return models.rhs(model, s, deriv)

    def shifted(k, a):
        with np.errstate(all="ignore"):
            plus, minus = state.plus + a * k[0], state.minus + a * k[1]
        _check_finite((plus, minus, k[0], k[1]), step_index, state.time)
        return state.replace(plus=plus, minus=minus)

    k1 = f(state)
    k2 = f(shifted(k1, h / 2))
    k3 = f(shifted(k2, h / 2))
    k4 = f(shifted(k3, h))
    with np.errstate(all="ignore"):
        plus = state.plus + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        minus = state.minus + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    _check_finite((plus, minus), step_index, state.time + h)
    return state.replace(plus=plus, minus=minus, time=state.time + h)


def _record(state, steps, dt):
    with np.errstate(over="ignore"):
        n = norm(state)
    if not np.isfinite(n):
        raise EvolutionError(f"norm overflow at step {steps} (t={state.time:.6g})", steps, state.time)
    return DiagnosticsRecord(state.time, n, state.max_amplitude(), steps, dt)


def evolve(model: ModelSpec, initial: SpinorState, t_final: float, integrator: Integrator,
           deriv: DerivativeOperator, sample_every: int = 1, on_sample=None) -> Trajectory:
    """Integrate to ``t_final`` and sample every ``sample_every`` steps.

    The final state is always sampled.  ``on_sample(state, record)`` is
    called for each sample as it is produced, so callers can stream output.
    A numerical blow-up raises :class:`EvolutionError` carrying the partial
    trajectory in ``err.trajectory``.
    """
    if t_final < initial.time:
        raise ValueError("t_final precedes the initial time")
    traj = Trajectory()

    def emit(state, steps, dt):
        rec = _record(state, steps, dt)
        traj.states.append(state)
        traj.diagnostics.append(rec)
        if on_sample is not None:
            on_sample(state, rec)

    emit(initial, 0, 0.0)
    if t_final == initial.time:
        return traj
    try:
        if integrator.scheme == "rk4":
            _run_rk4(model, initial, t_final, integrator, deriv, sample_every, emit)
        else:
            _run_rk45(model, initial, t_final, integrator, deriv, sample_every, emit)
    except EvolutionError as err:
        traj.truncated = True
        err.trajectory = traj
        raise
    return traj


def _run_rk4(model, state, t_final, integrator, deriv, sample_every, emit):
    dt = integrator.step_size(state.grid)
    n_steps = int(np.ceil((t_final - state.time) / dt - 1e-12))
    dt = (t_final - state.time) / n_steps
    t0 = state.time
    for i in range(1, n_steps + 1):
        state = step(model, state, integrator, deriv, dt, step_index=i)
        # pin the clock to avoid accumulating round-off in t
        state = state.replace(time=t0 + i * dt if i < n_steps else t_final)
        if i % sample_every == 0 or i == n_steps:
            emit(state, i, dt)


def _run_rk45(model, state, t_final, integrator, deriv, sample_every, emit):
    template = state

    def f(t, y):
        dp, dm = models.rhs(model, _unpack(y, template, t), deriv)
        return np.concatenate([dp.ravel(), dm.ravel()])

    solver = RK45(f, state.time, _pack(state), t_final, max_step=integrator.ceiling(state.grid),
                  rtol=integrator.rtol, atol=integrator.atol)
    i = 0
    while solver.status == "running":
        with np.errstate(all="ignore"):
            solver.step()
        i += 1
        if solver.status == "failed" or not np.all(np.isfinite(solver.y)):
            raise EvolutionError(f"non-finite field at step {i} (t={solver.t:.6g})", i, solver.t)
        if i % sample_every == 0 or solver.status == "finished":
            emit(_unpack(solver.y.copy(), template, solver.t), i, solver.step_size)


def predicted_norm_rate(model: ModelSpec, state: SpinorState, deriv: DerivativeOperator) -> float:
    """``d/dt norm`` at the current instant, from ``2 Re <psi, d_t psi>``."""
    dp, dm = models.rhs(model, state, deriv)
    density_rate = 2 * np.real(np.conj(state.plus) * dp + np.conj(state.minus) * dm)
    w = state.grid.quadrature_weights()
    if state.coords == "cylindrical" and state.frame == "psi":
        w = w * models.radial_coordinate(state.grid)
    return float(np.sum(density_rate * w))


def nonlinear_norm_rate(model: ModelSpec, state: SpinorState) -> float:
    """Norm rate ``2 Im <psi, N psi>`` of the field-dependent matrix N alone.

    The free operator is skew on periodic grids and adds nothing, so this is
    zero pointwise for Hermitian models and is the analytic drift rate for
    eq8a.  Cartesian and phi-frame states only.
    """
    p, q = state.plus, state.minus
    r = models.radial_coordinate(state.grid) if model.coords == "cylindrical" else None
    d_plus, d_minus, upper, lower = models.potentials(model, p, q, r)
    quad = np.conj(p) * ((model.m + d_plus) * p + upper * q) + np.conj(q) * (lower * p + (-model.m + d_minus) * q)
    return float(np.sum(2 * np.imag(quad) * state.grid.quadrature_weights()))
