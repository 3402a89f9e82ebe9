"""Uniform one- and two-dimensional grids for Cartesian and polar domains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

AXIS_KINDS = ("cartesian-x", "radial-r", "azimuthal-theta")


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on ``[s_min, s_max]``.

    Non-periodic axes include both endpoints, so the spacing is
    ``(s_max - s_min) / (n - 1)``.  Periodic axes treat ``s_max`` as the wrap
    point and do not duplicate it: spacing is ``(s_max - s_min) / n``.
    """

    n: int
    s_min: float
    s_max: float
    kind: str = "cartesian-x"
    periodic: bool = False

    def __post_init__(self):
        if self.kind not in AXIS_KINDS:
            raise ValueError(f"unknown axis kind {self.kind!r}")
        if self.n < 8:
            raise ValueError(f"grid needs at least 8 points, got {self.n}")
        if not self.s_max > self.s_min:
            raise ValueError("s_max must exceed s_min")
        if self.kind == "radial-r" and self.s_min <= 0:
            raise ValueError("radial grids must start at r_min > 0")
        if self.kind == "radial-r" and self.periodic:
            raise ValueError("radial axis cannot be periodic")

    @property
    def length(self) -> float:
        return self.s_max - self.s_min

    @property
    def spacing(self) -> float:
        if self.periodic:
            return self.length / self.n
        return self.length / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return self.s_min + self.spacing * np.arange(self.n)

    @property
    def shape(self) -> tuple[int]:
        return (self.n,)

    def quadrature_weights(self) -> np.ndarray:
        """Composite trapezoid weights (uniform for periodic axes)."""
        w = np.full(self.n, self.spacing)
        if not self.periodic:
            w[0] *= 0.5
            w[-1] *= 0.5
        return w

    def refined(self, factor: int = 2) -> "Grid1D":
        """Grid on the same interval whose points contain this grid's points."""
        if self.periodic:
            n = self.n * factor
        else:
            n = (self.n - 1) * factor + 1
        return Grid1D(n, self.s_min, self.s_max, self.kind, self.periodic)

    @property
    def coords(self) -> str:
        return "cylindrical" if self.kind == "radial-r" else "cartesian"

    @property
    def min_spacing(self) -> float:
        return self.spacing


@dataclass(frozen=True)
class Grid2D:
    """Tensor-product grid.  Arrays on it are indexed ``[i1, i2]``.

    Cartesian grids pair two ``cartesian-x`` axes (x, y).  Polar grids pair a
    ``radial-r`` axis with an ``azimuthal-theta`` axis; a periodic theta axis
    spanning ``2*pi`` is a closed disk or tube, anything else is a sector.
    """

    x_axis: Grid1D
    y_axis: Grid1D

    def __post_init__(self):
        polar = self.x_axis.kind == "radial-r"
        if polar and self.y_axis.kind != "azimuthal-theta":
            raise ValueError("radial axis must be paired with an azimuthal axis")
        if not polar and (self.x_axis.kind, self.y_axis.kind) != ("cartesian-x", "cartesian-x"):
            raise ValueError("Cartesian grids need two cartesian-x axes")

    @classmethod
    def cartesian(cls, nx, ny, x_bounds, y_bounds, boundary="periodic"):
        if boundary not in ("periodic", "dirichlet-zero"):
            raise ValueError(f"unknown boundary {boundary!r}")
        periodic = boundary == "periodic"
        return cls(
            Grid1D(nx, *x_bounds, kind="cartesian-x", periodic=periodic),
            Grid1D(ny, *y_bounds, kind="cartesian-x", periodic=periodic),
        )

    @classmethod
    def polar(cls, nr, r_bounds, n_theta, theta_bounds=(0.0, 2 * np.pi)):
        closed = np.isclose(theta_bounds[1] - theta_bounds[0], 2 * np.pi)
        return cls(
            Grid1D(nr, *r_bounds, kind="radial-r"),
            Grid1D(n_theta, *theta_bounds, kind="azimuthal-theta", periodic=bool(closed)),
        )

    @property
    def coords(self) -> str:
        return "cylindrical" if self.x_axis.kind == "radial-r" else "cartesian"

    @property
    def closed(self) -> bool:
        """True for a full 2*pi azimuthal range."""
        return self.coords == "cylindrical" and self.y_axis.periodic

    @property
    def boundary(self) -> str:
        return "periodic" if self.x_axis.periodic and self.y_axis.periodic else "dirichlet-zero"

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x_axis.n, self.y_axis.n)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x_axis.points, self.y_axis.points, indexing="ij")

    def quadrature_weights(self) -> np.ndarray:
        return np.outer(self.x_axis.quadrature_weights(), self.y_axis.quadrature_weights())

    @property
    def min_spacing(self) -> float:
        if self.coords == "cylindrical":
            return min(self.x_axis.spacing, self.x_axis.s_min * self.y_axis.spacing)
        return min(self.x_axis.spacing, self.y_axis.spacing)

    def refined(self, factor: int = 2) -> "Grid2D":
        return Grid2D(self.x_axis.refined(factor), self.y_axis.refined(factor))
