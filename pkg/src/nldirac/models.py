"""Registry of the nonlinear Dirac models in 2+1 dimensions.

Every model has the form ``i d_t psi = H(psi) psi`` with::

    H = [[ m + d_plus,        D12 + upper ],
         [ D21 + lower,      -m + d_minus ]]

where ``D12 = d_x - i d_y`` and ``D21 = -d_x - i d_y`` in Cartesian
coordinates, or ``D12 = d_r - (i/r) d_theta`` and ``D21 = -d_r - (i/r) d_theta``
for the polar (phi-frame) models.  A model is therefore fully described by
its four field-dependent potentials ``(d_plus, d_minus, upper, lower)``.

Model ids: eq5, eq7, eq8a, eq8b, eq9 are
Cartesian; eq10, eq11a, eq11b, eq13 are their polar forms; eq12 is the
time-separable Cartesian modification of eq8.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from types import MappingProxyType

import numpy as np

from .fd import DerivativeOperator
from .grid import Grid1D
from .spinor import RadicandPolicy, SpinorState, couplings_from_components

_LORENTZ = ("alpha_s", "alpha_v", "alpha_w")
_FOUR = ("alpha_plus", "alpha_minus", "beta_plus", "beta_minus")

COUPLING_NAMES = MappingProxyType({
    "eq5": ("alpha_s", "alpha_v", "alpha_u", "alpha_w"),
    "eq7": _LORENTZ,
    "eq8a": _FOUR,
    "eq8b": _FOUR,
    "eq9": ("alpha_plus", "alpha_minus", "alpha_w"),
    "eq10": _LORENTZ,
    "eq11a": _FOUR,
    "eq11b": _FOUR,
    "eq12": _FOUR,
    "eq13": _FOUR,
})

CYLINDRICAL = frozenset({"eq10", "eq11a", "eq11b", "eq13"})
SEPARABLE = frozenset({"eq7", "eq10", "eq12", "eq13"})

# eq9 couplings carry a length dimension; all others are dimensionless
CONFORMAL = frozenset(COUPLING_NAMES) - {"eq9"}


@dataclass(frozen=True)
class ModelSpec:
    equation: str
    m: float = 0.0
    couplings: dict = field(default_factory=dict)
    policy: RadicandPolicy = RadicandPolicy.SIGNED_SQRT

    def __post_init__(self):
        if self.equation not in COUPLING_NAMES:
            raise ValueError(f"unknown equation id {self.equation!r}")
        allowed = COUPLING_NAMES[self.equation]
        unknown = set(self.couplings) - set(allowed)
        if unknown:
            raise ValueError(f"{self.equation} has no couplings {sorted(unknown)}; allowed {allowed}")
        full = {name: float(self.couplings.get(name, 0.0)) for name in allowed}
        object.__setattr__(self, "couplings", MappingProxyType(full))
        object.__setattr__(self, "policy", RadicandPolicy(self.policy))
        object.__setattr__(self, "m", float(self.m))

    @property
    def coords(self) -> str:
        return "cylindrical" if self.equation in CYLINDRICAL else "cartesian"

    @property
    def dimensional_couplings(self) -> bool:
        return self.equation == "eq9"

    def __getitem__(self, name):
        return self.couplings[name]

    def with_(self, m=None, **couplings):
        merged = dict(self.couplings)
        merged.update(couplings)
        return replace(self, m=self.m if m is None else m, couplings=merged)

    def linear_limit(self):
        return replace(self, couplings={})


# -- nonlinear potentials ----------------------------------------------------
# Each returns (d_plus, d_minus, upper, lower) for component arrays p, q.
# Polar models receive r and carry the 1/sqrt(r) factor.

def _lorentz(c, p, q, policy, alpha_u=0.0):
    cf = couplings_from_components(p, q, policy)
    s = c["alpha_s"] * cf.s_tilde
    v = c["alpha_v"] * cf.v_tilde
    w = c["alpha_w"] * cf.w_tilde
    u = 1j * alpha_u * cf.u_tilde if alpha_u else 0.0
    return s + v, -s + v, w + u, w - u


def _eq5(c, p, q, policy, r):
    return _lorentz(c, p, q, policy, alpha_u=c["alpha_u"])


def _eq7(c, p, q, policy, r):
    return _lorentz(c, p, q, policy)


def _abs_diag(c, p, q):
    ap, aq = np.abs(p), np.abs(q)
    return c["alpha_plus"] * ap + c["alpha_minus"] * aq, c["alpha_plus"] * aq + c["alpha_minus"] * ap


def _eq8a(c, p, q, policy, r):
    b = c["beta_plus"] * p + c["beta_minus"] * q
    return (*_abs_diag(c, p, q), b, b)


def _eq8b(c, p, q, policy, r):
    b = c["beta_plus"] * p + c["beta_minus"] * q
    return (*_abs_diag(c, p, q), np.conj(b), b)


def _eq9(c, p, q, policy, r):
    a2, b2 = np.abs(p) ** 2, np.abs(q) ** 2
    w = c["alpha_w"] * 2 * np.real(np.conj(p) * q)
    return c["alpha_plus"] * a2 + c["alpha_minus"] * b2, c["alpha_plus"] * b2 + c["alpha_minus"] * a2, w, w


def _eq12(c, p, q, policy, r):
    b = c["beta_plus"] * np.abs(p) + c["beta_minus"] * np.abs(q)
    return (*_abs_diag(c, p, q), b, b)


def _polar(cartesian):
    def potentials(c, p, q, policy, r):
        k = 1.0 / np.sqrt(r)
        return tuple(k * t for t in cartesian(c, p, q, policy, r))
    return potentials


def _eq11a(c, p, q, policy, r):
    b = c["beta_plus"] * p + c["beta_minus"] * q
    return (*_abs_diag(c, p, q), b, np.conj(b))


POTENTIALS = MappingProxyType({
    "eq5": _eq5,
    "eq7": _eq7,
    "eq8a": _eq8a,
    "eq8b": _eq8b,
    "eq9": _eq9,
    "eq10": _polar(_eq7),
    "eq11a": _polar(_eq11a),
    "eq11b": _polar(_eq8b),
    "eq12": _eq12,
    "eq13": _polar(_eq12),
})


def potentials(spec: ModelSpec, p, q, r=None):
    if spec.coords == "cylindrical" and r is None:
        raise ValueError(f"{spec.equation} needs the radial coordinate")
    return POTENTIALS[spec.equation](spec.couplings, np.asarray(p), np.asarray(q), spec.policy, r)


def nonlinear_matrix(spec: ModelSpec, p, q, r=None):
    """Field-dependent (non-derivative) part of H at a single point, as 2x2."""
    d_plus, d_minus, upper, lower = (complex(np.asarray(t).item()) for t in potentials(spec, p, q, r))
    return np.array([[spec.m + d_plus, upper], [lower, -spec.m + d_minus]])


# -- Hamiltonian action and residual -------------------------------------------

def apply_hamiltonian(spec: ModelSpec, p, q, grad_p, grad_q, r=None):
    """``H(psi) psi`` from component values and their spatial derivatives.

    ``grad_p = (d1 p, d2 p)`` with axis 1 = x (or r) and axis 2 = y (or theta).
    """
    d_plus, d_minus, upper, lower = potentials(spec, p, q, r)
    p1, p2 = grad_p
    q1, q2 = grad_q
    if spec.coords == "cylindrical":
        p2, q2 = p2 / r, q2 / r
    hp = (spec.m + d_plus) * p + (q1 - 1j * q2) + upper * q
    hq = (-p1 - 1j * p2) + lower * p + (-spec.m + d_minus) * q
    return hp, hq


def pointwise_residual(spec: ModelSpec, p, q, dt_p, dt_q, grad_p, grad_q, r=None):
    """``R = i d_t psi - H(psi) psi`` from supplied derivative values."""
    hp, hq = apply_hamiltonian(spec, p, q, grad_p, grad_q, r)
    return 1j * np.asarray(dt_p) - hp, 1j * np.asarray(dt_q) - hq


def _check_state(spec, state):
    if spec.coords != state.coords:
        raise ValueError(f"{spec.equation} is {spec.coords} but the state lives on a {state.coords} grid")
    if spec.coords == "cylindrical" and state.frame != "phi":
        raise ValueError(f"{spec.equation} acts on phi-frame states; convert with phi_from_psi")


def radial_coordinate(grid):
    if isinstance(grid, Grid1D):
        return grid.points
    return grid.x_axis.points[:, None]


def spatial_gradients(state: SpinorState, deriv: DerivativeOperator):
    grads = []
    for f in (state.plus, state.minus):
        d1, d2 = deriv.gradient(f, state.grid, state.frame)
        if d2 is None:
            d2 = 1j * state.wavenumber * f
        grads.append((d1, d2))
    return grads


def residual(spec: ModelSpec, state: SpinorState, time_derivative, deriv: DerivativeOperator):
    """Residual field of ``state`` given its time derivative ``(d_t p, d_t q)``."""
    _check_state(spec, state)
    gp, gq = spatial_gradients(state, deriv)
    r = radial_coordinate(state.grid) if spec.coords == "cylindrical" else None
    return pointwise_residual(spec, state.plus, state.minus, *time_derivative, gp, gq, r)


def rhs(spec: ModelSpec, state: SpinorState, deriv: DerivativeOperator):
    """Time derivative ``d_t psi = -i H(psi) psi`` as a component pair."""
    _check_state(spec, state)
    gp, gq = spatial_gradients(state, deriv)
    r = radial_coordinate(state.grid) if spec.coords == "cylindrical" else None
    hp, hq = apply_hamiltonian(spec, state.plus, state.minus, gp, gq, r)
    return -1j * hp, -1j * hq


# -- Hermiticity ----------------------------------------------------------------

@dataclass(frozen=True)
class HermiticityClass:
    equation: str
    is_hermitian: bool
    max_defect: float


# Read off the printed matrices: eq8a repeats beta_+ psi_+ + beta_- psi_- on
# both off-diagonals.  The printed polar forms eq11a and eq11b both place the
# conjugate on one off-diagonal only, so both are Hermitian.
HERMITIAN = MappingProxyType({eq: eq != "eq8a" for eq in COUPLING_NAMES})


def hermiticity(spec: ModelSpec, probes=None) -> HermiticityClass:
    """Probe ``H - H^dag`` of the field-dependent part at complex states.

    Couplings left at zero in ``spec`` are set to 1 for the probe, so the
    verdict reflects the equation's structure rather than its parameters.
    """
    probe_spec = spec.with_(**{k: (v if v else 1.0) for k, v in spec.couplings.items()})
    if probes is None:
        probes = [(1.0, 1j), (0.3 - 0.8j, 1.1 + 0.4j), (2.0, -0.5 + 0.5j)]
    r = 1.7 if spec.coords == "cylindrical" else None
    defect = 0.0
    for p, q in probes:
        h = nonlinear_matrix(probe_spec, p, q, r)
        defect = max(defect, float(np.max(np.abs(h - h.conj().T))))
    return HermiticityClass(spec.equation, defect <= 1e-12, defect)
