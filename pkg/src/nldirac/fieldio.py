"""CSV formats for field snapshots, diagnostics, profiles and sweeps.

All numbers are written with 17 significant digits, ``.`` as the decimal
separator and ``\\n`` line endings, so identical runs give identical bytes.
"""

from __future__ import annotations

import csv

import numpy as np

from .grid import Grid1D, Grid2D
from .spinor import PhiState, SpinorState

FIELD_HEADER = {
    "cartesian": ("t", "x", "y", "re_plus", "im_plus", "re_minus", "im_minus"),
    "cylindrical": ("t", "r", "theta", "re_plus", "im_plus", "re_minus", "im_minus"),
}
DIAGNOSTICS_HEADER = ("t", "norm", "max_abs", "dt", "steps")
PROFILE_HEADER = ("s", "re_plus", "im_plus", "re_minus", "im_minus")


class SchemaError(ValueError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return "%.17g" % float(x)


def writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _coords(grid):
    if isinstance(grid, Grid1D):
        return grid.points[:, None], np.zeros((grid.n, 1))
    s1, s2 = grid.mesh()
    return s1, s2


def write_field_header(fh, coords):
    writer(fh).writerow(FIELD_HEADER[coords])


def write_field_rows(fh, state: SpinorState):
    s1, s2 = _coords(state.grid)
    p = state.plus.reshape(s1.shape)
    q = state.minus.reshape(s1.shape)
    w = writer(fh)
    for i in range(s1.shape[0]):
        for j in range(s1.shape[1]):
            w.writerow([fmt(v) for v in (state.time, s1[i, j], s2[i, j], p[i, j].real,
                                         p[i, j].imag, q[i, j].real, q[i, j].imag)])


def write_diagnostics_header(fh):
    writer(fh).writerow(DIAGNOSTICS_HEADER)


def write_diagnostics_row(fh, rec):
    writer(fh).writerow([fmt(rec.time), fmt(rec.norm), fmt(rec.max_amplitude),
                         fmt(rec.dt_current), fmt(rec.step_count)])


def write_profile(fh, profile):
    w = writer(fh)
    w.writerow(PROFILE_HEADER)
    for s, a, b in zip(profile.grid.points, profile.chi_plus, profile.chi_minus):
        w.writerow([fmt(s), fmt(a.real), fmt(a.imag), fmt(b.real), fmt(b.imag)])


def _uniform_axis(values, name, kind, periodic, period=None):
    vals = np.unique(values)
    if vals.size == 1:
        return None
    steps = np.diff(vals)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
        raise SchemaError(f"{name} values are not uniformly spaced")
    h = steps[0]
    if period is not None and np.isclose(vals.size * h, period, rtol=1e-9):
        return Grid1D(vals.size, vals[0], vals[0] + period, kind=kind, periodic=True)
    if periodic:
        return Grid1D(vals.size, vals[0], vals[-1] + h, kind=kind, periodic=True)
    return Grid1D(vals.size, vals[0], vals[-1], kind=kind)


def read_fields(path, periodic=False, wavenumber=0.0):
    """Read one snapshot.  Returns a SpinorState (Cartesian) or PhiState (polar).

    A single distinct y (or theta) value gives a 1D state.  Rows must be
    row-major over (s1, s2).  ``periodic`` marks Cartesian axes as periodic;
    theta axes spanning 2*pi are detected as closed.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise SchemaError("empty file", 1)
    header = tuple(lines[0].split(","))
    coords = next((c for c, h in FIELD_HEADER.items() if h == header), None)
    if coords is None:
        raise SchemaError(f"unexpected header {lines[0]!r}", 1)
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 7:
            raise SchemaError(f"expected 7 columns, got {len(parts)}", lineno)
        try:
            vals = [float(x) for x in parts]
        except ValueError as exc:
            raise SchemaError(f"non-numeric value ({exc})", lineno) from None
        if not all(np.isfinite(vals)):
            raise SchemaError("non-finite value", lineno)
        rows.append(vals)
    if not rows:
        raise SchemaError("no data rows", 2)
    data = np.array(rows)
    if not np.all(data[:, 0] == data[0, 0]):
        bad = int(np.argmax(data[:, 0] != data[0, 0])) + 2
        raise SchemaError("file must hold a single time slice", bad)

    kind1, kind2 = ("radial-r", "azimuthal-theta") if coords == "cylindrical" else ("cartesian-x", "cartesian-x")
    s1 = np.unique(data[:, 1])
    s2 = np.unique(data[:, 2])
    if data.shape[0] != s1.size * s2.size:
        raise SchemaError(f"{data.shape[0]} rows do not fill a {s1.size}x{s2.size} grid", data.shape[0] + 1)
    bad = np.flatnonzero((data[:, 1] != np.repeat(s1, s2.size)) | (data[:, 2] != np.tile(s2, s1.size)))
    if bad.size:
        raise SchemaError("rows are not in row-major grid order", int(bad[0]) + 2)
    try:
        ax1 = _uniform_axis(data[:, 1], header[1], kind1, periodic and coords == "cartesian")
        ax2 = _uniform_axis(data[:, 2], header[2], kind2,
                            periodic and coords == "cartesian",
                            period=2 * np.pi if coords == "cylindrical" else None)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    if ax1 is None:
        raise SchemaError("need at least 8 distinct values along the first axis")
    plus = data[:, 3] + 1j * data[:, 4]
    minus = data[:, 5] + 1j * data[:, 6]
    cls = PhiState if coords == "cylindrical" else SpinorState
    if ax2 is None:
        return cls(ax1, plus, minus, data[0, 0], wavenumber)
    grid = Grid2D(ax1, ax2)
    return cls(grid, plus.reshape(grid.shape), minus.reshape(grid.shape), data[0, 0])
