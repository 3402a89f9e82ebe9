"""Spinor field containers and the pointwise self-interaction couplings.

The four couplings are square roots of the scalar and vector bilinears of a
two-component spinor in 2+1 dimensions::

    S = sqrt(|p|^2 - |q|^2)          V = sqrt(|p|^2 + |q|^2)
    U = sqrt(i (p* q - p q*))         W = sqrt(p* q + p q*)

with ``p = psi_plus`` and ``q = psi_minus``.  The S, U and W radicands can be
negative, so the square root is taken through a :class:`RadicandPolicy`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .grid import Grid1D, Grid2D

IMAG_RESIDUE_TOL = 1e-12


class RadicandError(ValueError):
    """A negative radicand was met under the ``error`` policy."""


class RadicandPolicy(str, enum.Enum):
    SIGNED_SQRT = "signed-sqrt"
    CLAMP = "clamp-to-zero"
    ERROR = "error-on-negative"

    def root(self, u, name="radicand"):
        u = np.asarray(u, dtype=float)
        if self is RadicandPolicy.SIGNED_SQRT:
            return np.sign(u) * np.sqrt(np.abs(u))
        if self is RadicandPolicy.CLAMP:
            return np.sqrt(np.clip(u, 0.0, None))
        neg = np.argwhere(u < 0)
        if neg.size:
            idx = tuple(int(i) for i in neg[0])
            raise RadicandError(f"negative {name} {u[idx]:.6g} at grid index {idx}")
        return np.sqrt(u)


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpinorState:
    """Two complex component fields on a grid at one instant.

    A state on a :class:`Grid1D` stands for a field that depends on the cyclic
    coordinate (y, or theta on radial grids) only through ``exp(i*wavenumber*y)``.
    """

    grid: Grid1D | Grid2D
    plus: np.ndarray
    minus: np.ndarray
    time: float = 0.0
    wavenumber: float = 0.0

    # φ-variable states override this
    frame = "psi"

    def __post_init__(self):
        plus, minus = _readonly(self.plus), _readonly(self.minus)
        if plus.shape != self.grid.shape or minus.shape != self.grid.shape:
            raise ValueError(
                f"component shapes {plus.shape}, {minus.shape} do not match grid {self.grid.shape}"
            )
        if not (np.all(np.isfinite(plus)) and np.all(np.isfinite(minus))):
            raise ValueError("spinor amplitudes must be finite")
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    @property
    def coords(self) -> str:
        return self.grid.coords

    def replace(self, plus=None, minus=None, time=None):
        return type(self)(
            self.grid,
            self.plus if plus is None else plus,
            self.minus if minus is None else minus,
            self.time if time is None else time,
            self.wavenumber,
        )

    @classmethod
    def zeros(cls, grid, time=0.0, wavenumber=0.0):
        z = np.zeros(grid.shape, dtype=complex)
        return cls(grid, z, z, time, wavenumber)

    def max_amplitude(self) -> float:
        return float(np.max(np.hypot(np.abs(self.plus), np.abs(self.minus))))


class PhiState(SpinorState):
    """Rescaled polar spinor ``phi = sqrt(r) exp(i theta sigma_3 / 2) psi``."""

    frame = "phi"


@dataclass(frozen=True)
class CouplingFields:
    s_tilde: np.ndarray
    v_tilde: np.ndarray
    u_tilde: np.ndarray
    w_tilde: np.ndarray

    def as_tuple(self):
        return (self.s_tilde, self.v_tilde, self.u_tilde, self.w_tilde)


def _real_radicand(z, scale, name):
    z = np.asarray(z)
    residue = np.abs(z.imag)
    bad = residue > IMAG_RESIDUE_TOL * np.maximum(scale, 1.0)
    if np.any(bad):
        raise ArithmeticError(f"{name} radicand has imaginary residue {residue.max():.3g}")
    return z.real


def radicands(plus, minus):
    """Radicands of (S, V, U, W) for component arrays."""
    plus = np.asarray(plus, dtype=complex)
    minus = np.asarray(minus, dtype=complex)
    a2, b2 = np.abs(plus) ** 2, np.abs(minus) ** 2
    cross = np.conj(plus) * minus
    scale = 2 * np.abs(cross)
    u = _real_radicand(1j * (cross - plus * np.conj(minus)), scale, "U")
    w = _real_radicand(cross + plus * np.conj(minus), scale, "W")
    return a2 - b2, a2 + b2, u, w


def couplings_from_components(plus, minus, policy=RadicandPolicy.SIGNED_SQRT):
    policy = RadicandPolicy(policy)
    rs, rv, ru, rw = radicands(plus, minus)
    return CouplingFields(
        s_tilde=policy.root(rs, "S radicand"),
        v_tilde=np.sqrt(rv),
        u_tilde=policy.root(ru, "U radicand"),
        w_tilde=policy.root(rw, "W radicand"),
    )


def compute_couplings(state: SpinorState, policy=RadicandPolicy.SIGNED_SQRT) -> CouplingFields:
    return couplings_from_components(state.plus, state.minus, policy)


def norm(state: SpinorState) -> float:
    """Trapezoid-rule integral of the density.

    Cartesian states integrate ``psi^dag psi dx dy``; psi on a polar grid
    carries the ``r dr dtheta`` measure, while phi states use ``dr dtheta``.
    """
    density = np.abs(state.plus) ** 2 + np.abs(state.minus) ** 2
    w = state.grid.quadrature_weights()
    if state.coords == "cylindrical" and state.frame == "psi":
        r = state.grid.x_axis.points if isinstance(state.grid, Grid2D) else state.grid.points
        w = w * (r[:, None] if isinstance(state.grid, Grid2D) else r)
    return float(np.sum(density * w))
