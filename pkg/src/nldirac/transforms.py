"""Gauge removal of the U coupling and the Cartesian/polar spinor map."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid1D, Grid2D
from .spinor import PhiState, SpinorState


@dataclass(frozen=True)
class GaugePhase:
    """Phase field ``theta(x)`` with ``d theta/dx = U`` and ``theta(x_min) = 0``."""

    theta: np.ndarray
    alpha_u: float

    def factor(self):
        return np.exp(-1j * self.alpha_u * self.theta)


def _interval_integrals(f, h, order):
    if order == 2:
        return 0.5 * h * (f[:-1] + f[1:])
    # cubic through four neighbours; one-sided cubic on the end intervals
    inner = h / 24 * (-f[:-3] + 13 * f[1:-2] + 13 * f[2:-1] - f[3:])
    first = h / 24 * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3])
    last = h / 24 * (9 * f[-1] + 19 * f[-2] - 5 * f[-3] + f[-4])
    return np.concatenate([[first], inner, [last]])


def gauge_phase(u_tilde, grid: Grid1D, alpha_u: float = 1.0, order: int = 2) -> GaugePhase:
    """Cumulative x-integral of ``u_tilde`` starting from zero at ``x_min``.

    ``order=2`` is the composite trapezoid rule.  ``order=4`` integrates the
    local cubic interpolant, which keeps ``theta`` consistent with a
    fourth-order derivative stencil.
    """
    if not isinstance(grid, Grid1D) or grid.kind != "cartesian-x":
        raise ValueError("the gauge map is defined for y-independent states on an x grid")
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    u = np.asarray(u_tilde, dtype=float)
    if u.shape != grid.shape:
        raise ValueError("u_tilde does not match the grid")
    steps = _interval_integrals(u, grid.spacing, order)
    return GaugePhase(np.concatenate([[0.0], np.cumsum(steps)]), float(alpha_u))


def apply_gauge(state: SpinorState, phase: GaugePhase) -> SpinorState:
    """Multiply both components by ``exp(-i alpha_U theta)``.

    If ``state`` solves the model without the U term, the result solves the
    model with it: the U coupling is exactly what the phase gradient produces.
    """
    if phase.theta.shape != state.plus.shape:
        raise ValueError("phase and state shapes differ")
    g = phase.factor()
    return state.replace(plus=state.plus * g, minus=state.minus * g)


def _polar_mesh(grid):
    if not isinstance(grid, Grid2D) or grid.coords != "cylindrical":
        raise ValueError("phi/psi map needs a polar grid")
    r, theta = grid.mesh()
    if np.any(r <= 0):
        raise ValueError("radial coordinate must be positive")
    return r, theta


def phi_from_psi(state: SpinorState) -> PhiState:
    r, theta = _polar_mesh(state.grid)
    root = np.sqrt(r)
    return PhiState(
        state.grid,
        root * np.exp(0.5j * theta) * state.plus,
        root * np.exp(-0.5j * theta) * state.minus,
        state.time,
        state.wavenumber,
    )


def psi_from_phi(state: PhiState) -> SpinorState:
    r, theta = _polar_mesh(state.grid)
    root = np.sqrt(r)
    return SpinorState(
        state.grid,
        np.exp(-0.5j * theta) * state.plus / root,
        np.exp(0.5j * theta) * state.minus / root,
        state.time,
        state.wavenumber,
    )
