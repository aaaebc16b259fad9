"""Aperture sampling lattices and oversampling measures."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .emcore import CarrierConfig
from .errors import ValidationError

LATTICE_KINDS = ("rectangular", "hexagonal")


@dataclass(frozen=True)
class SamplingLattice:
    """A set of sampling points in the z = 0 plane of a rectangular region."""

    kind: str
    pitch_m: float
    points: np.ndarray = field(repr=False)  # (N, 3)

    def __post_init__(self):
        if self.kind not in LATTICE_KINDS:
            raise ValidationError(f"unknown lattice kind {self.kind!r}")
        if self.pitch_m <= 0:
            raise ValidationError("pitch must be positive")


def nyquist_spacing(carrier: CarrierConfig) -> float:
    """Half-wavelength sampling interval at which field samples are nearly orthogonal."""
    return carrier.wavelength_m / 2.0


def generate_lattice(width_m: float, height_m: float, kind: str, pitch_m: float) -> SamplingLattice:
    """Sampling points covering a width x height rectangle.

    Rectangular lattices are square grids anchored at the region corner,
    boundary points included.  Hexagonal lattices are triangular: row
    spacing pitch*sqrt(3)/2 and every other row offset by pitch/2.  A
    pitch larger than both dimensions degenerates to the single centre
    point.
    """
    if width_m <= 0 or height_m <= 0 or pitch_m <= 0:
        raise ValidationError("dimensions and pitch must be positive")
    if kind not in LATTICE_KINDS:
        raise ValidationError(f"unknown lattice kind {kind!r}")
    if pitch_m > width_m and pitch_m > height_m:
        pts = np.array([[width_m / 2.0, height_m / 2.0, 0.0]])
        return SamplingLattice(kind=kind, pitch_m=pitch_m, points=pts)

    tol = 1e-9 * pitch_m
    if kind == "rectangular":
        nx = int(np.floor(width_m / pitch_m + 1e-9))
        ny = int(np.floor(height_m / pitch_m + 1e-9))
        xs = np.arange(nx + 1) * pitch_m
        ys = np.arange(ny + 1) * pitch_m
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        pts = np.column_stack([X.ravel(), Y.ravel(), np.zeros(X.size)])
    else:
        row_step = pitch_m * np.sqrt(3.0) / 2.0
        rows = int(np.floor(height_m / row_step + 1e-9))
        out = []
        for j in range(rows + 1):
            y = j * row_step
            offset = (pitch_m / 2.0) if (j % 2) else 0.0
            nx = int(np.floor((width_m - offset) / pitch_m + 1e-9))
            if width_m - offset < -tol:
                continue
            xs = offset + np.arange(nx + 1) * pitch_m
            out.append(np.column_stack([xs, np.full(xs.size, y), np.zeros(xs.size)]))
        pts = np.vstack(out)
    return SamplingLattice(kind=kind, pitch_m=pitch_m, points=pts)


def oversampling_factor(pitch_m: float, carrier: CarrierConfig) -> float:
    """Spatial oversampling ratio (lambda/2) / pitch; above 1 means denser than Nyquist."""
    if pitch_m <= 0:
        raise ValidationError("pitch must be positive")
    return nyquist_spacing(carrier) / pitch_m


def write_lattice_csv(lattice: SamplingLattice, path) -> None:
    """Point list as x,y,z columns, consumable as aperture element centers."""
    lines = ["x_m,y_m,z_m"]
    for p in lattice.points:
        lines.append(",".join(repr(float(c)) for c in p))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_lattice_points(path) -> np.ndarray:
    """Parse a lattice CSV back into an (N, 3) point array."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    return np.array([[float(tok) for tok in ln.split(",")] for ln in lines[1:]])
