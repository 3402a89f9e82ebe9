"""Cyclic-coordinate reductions of the time-separable models to 1D systems.

Cartesian models take ``psi(t, x, y) = exp(i(k y - eps t)) chi(x)``.  Polar
models take ``phi(t, r, theta) = exp(i(kappa theta - eps t)) chi(r)``, which
is the same as ``psi = r^{-1/2} exp(-i theta sigma_3/2) exp(i(kappa theta -
eps t)) chi(r)``; psi is single-valued on a closed disk only for half-odd
``kappa``.

The reduced residual is computed by the model registry itself, with the
cyclic and time derivatives replaced by ``i k`` and ``-i eps``.  Every reduced
system has the shape::

    eps chi_+ = A chi_+ + chi_-' + B chi_-
    eps chi_- = -chi_+' + C chi_+ + D chi_-

so it can always be solved explicitly for ``(chi_+', chi_-')``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import models
from .fd import DerivativeOperator
from .grid import Grid1D, Grid2D
from .models import ModelSpec
from .spinor import PhiState, SpinorState


class UnsupportedModel(ValueError):
    pass


class QuantizationError(ValueError):
    pass


@dataclass(frozen=True)
class ReducedProfile:
    grid: Grid1D
    chi_plus: np.ndarray
    chi_minus: np.ndarray
    epsilon: float = 0.0
    wavenumber: float = 0.0

    def __post_init__(self):
        for name in ("chi_plus", "chi_minus"):
            a = np.asarray(getattr(self, name), dtype=complex)
            if a.shape != self.grid.shape:
                raise ValueError(f"{name} does not match the grid")
            object.__setattr__(self, name, a)


def is_half_odd(kappa, tol=1e-12):
    return abs((kappa - 0.5) - round(kappa - 0.5)) < tol


@dataclass(frozen=True)
class ReducedSystem:
    model: ModelSpec
    epsilon: float
    wavenumber: float

    @property
    def cylindrical(self):
        return self.model.coords == "cylindrical"

    def residual_at(self, s, chi_plus, chi_minus, d_plus, d_minus):
        """Reduced residual pair at coordinates ``s`` (x or r)."""
        ik, e = 1j * self.wavenumber, -1j * self.epsilon
        cp = np.asarray(chi_plus, dtype=complex)
        cm = np.asarray(chi_minus, dtype=complex)
        return models.pointwise_residual(
            self.model, cp, cm, e * cp, e * cm,
            (d_plus, ik * cp), (d_minus, ik * cm),
            r=np.asarray(s, dtype=float) if self.cylindrical else None,
        )

    def derivative(self, s, chi_plus, chi_minus):
        """Explicit form ``(chi_+', chi_-') = F(s, chi_+, chi_-)``."""
        zero = np.zeros_like(np.asarray(chi_plus, dtype=complex))
        g_plus, g_minus = self.residual_at(s, chi_plus, chi_minus, zero, zero)
        return -g_minus, g_plus


def reduce(model: ModelSpec, epsilon: float, wavenumber: float = 0.0) -> ReducedSystem:
    if model.equation not in models.SEPARABLE:
        raise UnsupportedModel(
            f"{model.equation} does not separate under a stationary ansatz; "
            f"only {sorted(models.SEPARABLE)} admit cyclic-coordinate reductions"
        )
    return ReducedSystem(model, float(epsilon), float(wavenumber))


def reduced_residual(system: ReducedSystem, profile: ReducedProfile, derivatives=None,
                     deriv: DerivativeOperator | None = None) -> float:
    """L-infinity norm of the stacked reduced residual.

    Without ``derivatives`` the profile is differentiated with a fourth-order
    stencil and the points reached by the one-sided end stencils are skipped.
    """
    s = profile.grid.points
    if derivatives is None:
        deriv = deriv or DerivativeOperator(order=4, edge="one-sided")
        derivatives = (deriv.along(profile.chi_plus, profile.grid),
                       deriv.along(profile.chi_minus, profile.grid))
        cut = slice(deriv.order // 2, -(deriv.order // 2))
    else:
        cut = slice(None)
    r_plus, r_minus = system.residual_at(s, profile.chi_plus, profile.chi_minus, *derivatives)
    return float(max(np.max(np.abs(r_plus[cut])), np.max(np.abs(r_minus[cut]))))


def lift(profile: ReducedProfile, model: ModelSpec, grid: Grid2D | None = None, time: float = 0.0):
    """Rebuild the full field from a profile at time ``time``.

    With ``grid=None`` the result is a 1D state carrying the wavenumber;
    otherwise the grid's first axis must coincide with the profile grid.
    Polar models return a :class:`PhiState`.
    """
    cls = PhiState if model.coords == "cylindrical" else SpinorState
    phase_t = np.exp(-1j * profile.epsilon * time)
    if grid is None:
        return cls(profile.grid, phase_t * profile.chi_plus, phase_t * profile.chi_minus,
                   time, profile.wavenumber)
    if grid.coords != model.coords:
        raise ValueError("target grid does not match the model's coordinates")
    if grid.x_axis != profile.grid:
        raise ValueError("target grid must share the profile's axis")
    if grid.closed and not is_half_odd(profile.wavenumber):
        raise QuantizationError(
            f"kappa={profile.wavenumber} on a closed azimuthal domain; continuity "
            "requires kappa in {+-1/2, +-3/2, ...}"
        )
    cyc = np.exp(1j * profile.wavenumber * grid.y_axis.points)[None, :] * phase_t
    return cls(grid, profile.chi_plus[:, None] * cyc, profile.chi_minus[:, None] * cyc, time, 0.0)


def plane_wave_matrix(system: ReducedSystem, q: float, epsilon: float) -> np.ndarray:
    """Linear map from plane-wave amplitudes ``(a_+, a_-)`` to the reduced residual.

    Only meaningful in the linear limit; evaluated at ``s = 1``.
    """
    trial = ReducedSystem(system.model, epsilon, system.wavenumber)
    cols = []
    for a in ((1.0, 0.0), (0.0, 1.0)):
        cp, cm = np.array([a[0]], complex), np.array([a[1]], complex)
        rp, rm = trial.residual_at(np.array([1.0]), cp, cm, 1j * q * cp, 1j * q * cm)
        cols.append([rp[0], rm[0]])
    return np.array(cols).T


def dispersion_determinant(system: ReducedSystem, q: float, epsilon: float) -> complex:
    return complex(np.linalg.det(plane_wave_matrix(system, q, epsilon)))


def free_energy_root(system: ReducedSystem, q: float) -> float:
    """Positive energy at which the plane-wave determinant vanishes."""
    def f(e):
        return dispersion_determinant(system, q, e).real

    hi = abs(system.model.m) + abs(q) + abs(system.wavenumber) + 1.0
    return brentq(f, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
