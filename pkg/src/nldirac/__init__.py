"""Nonlinear Dirac models in 2+1 dimensions: residuals, reductions, evolution."""

from .evolve import EvolutionError, Integrator, Trajectory
from .fd import DerivativeOperator, diff, effective_wavenumber
from .grid import Grid1D, Grid2D
from .models import HERMITIAN, ModelSpec, hermiticity, residual, rhs
from .odesolve import IvpProblem, IvpResult, integrate
from .oracles import TABLE1, DomainError, evaluate, verify_row
from .reductions import QuantizationError, ReducedProfile, UnsupportedModel, lift, reduce, reduced_residual
from .scaling import ScaleReport, scale_check
from .spinor import (
    CouplingFields,
    PhiState,
    RadicandError,
    RadicandPolicy,
    SpinorState,
    compute_couplings,
    norm,
)
from .transforms import apply_gauge, gauge_phase, phi_from_psi, psi_from_phi

__all__ = [
    "CouplingFields", "DerivativeOperator", "DomainError", "EvolutionError", "Grid1D", "Grid2D",
    "HERMITIAN", "Integrator", "IvpProblem", "IvpResult", "ModelSpec", "PhiState", "QuantizationError",
    "RadicandError", "RadicandPolicy", "ReducedProfile", "ScaleReport", "SpinorState", "TABLE1",
    "Trajectory", "UnsupportedModel", "apply_gauge", "compute_couplings", "diff", "effective_wavenumber",
    "evaluate", "gauge_phase", "hermiticity", "integrate", "lift", "norm", "phi_from_psi",
    "psi_from_phi", "reduce", "reduced_residual", "residual", "rhs", "scale_check", "verify_row",
]
