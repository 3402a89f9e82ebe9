"""Central finite-difference first derivatives on uniform grids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid1D

_CENTRAL = {
    2: np.array([-0.5, 0.0, 0.5]),
    4: np.array([1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12]),
}

# rows: derivative at edge points 0, 1, ... from samples f0..f(k-1)
_ONE_SIDED = {
    2: np.array([[-1.5, 2.0, -0.5]]),
    4: np.array([
        [-25.0, 48.0, -36.0, 16.0, -3.0],
        [-3.0, -10.0, 18.0, -6.0, 1.0],
    ]) / 12.0,
}

EDGE_MODES = ("one-sided", "dirichlet")


def diff(f, h, axis=0, order=4, boundary="periodic"):
    """First derivative of ``f`` along ``axis``.

    ``boundary`` is one of ``periodic``, ``antiperiodic`` (sign flip across the
    wrap, used for half-odd azimuthal spinors), ``dirichlet`` (field vanishes
    beyond the last point; the stencil stays skew-symmetric) or ``one-sided``
    (biased stencils of the same order at the two ends).
    """
    if order not in _CENTRAL:
        raise ValueError(f"stencil order must be 2 or 4, got {order}")
    f = np.moveaxis(np.asarray(f), axis, 0)
    g = order // 2
    n = f.shape[0]
    if n < 2 * g + 1:
        raise ValueError("too few points for the stencil")
    if boundary in ("periodic", "antiperiodic"):
        sign = -1.0 if boundary == "antiperiodic" else 1.0
        padded = np.concatenate([sign * f[-g:], f, sign * f[:g]])
    elif boundary in EDGE_MODES:
        ghost = np.zeros((g,) + f.shape[1:], dtype=f.dtype)
        padded = np.concatenate([ghost, f, ghost])
    else:
        raise ValueError(f"unknown boundary {boundary!r}")

    coeffs = _CENTRAL[order]
    out = sum(c * padded[k : k + n] for k, c in enumerate(coeffs) if c != 0.0)

    if boundary == "one-sided":
        rows = _ONE_SIDED[order]
        width = rows.shape[1]
        for i, row in enumerate(rows):
            out[i] = np.tensordot(row, f[:width], axes=1)
            out[n - 1 - i] = -np.tensordot(row, f[::-1][:width], axes=1)
    return np.moveaxis(out / h, 0, axis)


@dataclass(frozen=True)
class DerivativeOperator:
    """Spatial derivative on the axes of a grid.

    Periodic axes always wrap.  ``edge`` decides what happens on the ends of
    non-periodic axes.  On closed polar grids phi-frame fields are
    antiperiodic in theta, so the theta wrap flips sign for them.
    """

    order: int = 4
    edge: str = "one-sided"

    def __post_init__(self):
        if self.order not in _CENTRAL:
            raise ValueError(f"stencil order must be 2 or 4, got {self.order}")
        if self.edge not in EDGE_MODES:
            raise ValueError(f"edge must be one of {EDGE_MODES}")

    def _mode(self, axis: Grid1D, antiperiodic=False):
        if axis.periodic:
            return "antiperiodic" if antiperiodic else "periodic"
        return self.edge

    def along(self, f, axis: Grid1D, dim=0, antiperiodic=False):
        return diff(f, axis.spacing, dim, self.order, self._mode(axis, antiperiodic))

    def gradient(self, f, grid, frame="psi"):
        """Return ``(d/ds1 f, d/ds2 f)``; the second entry is None on 1D grids."""
        if isinstance(grid, Grid1D):
            return self.along(f, grid), None
        anti = grid.closed and frame == "phi"
        return (
            self.along(f, grid.x_axis, 0),
            self.along(f, grid.y_axis, 1, antiperiodic=anti),
        )


def effective_wavenumber(q, h, order=4):
    """Symbol of the central stencil: ``diff(exp(i q x)) = i * q_eff * exp(i q x)``."""
    if order == 2:
        return np.sin(q * h) / h
    if order == 4:
        return (8 * np.sin(q * h) - np.sin(2 * q * h)) / (6 * h)
    raise ValueError(f"stencil order must be 2 or 4, got {order}")
