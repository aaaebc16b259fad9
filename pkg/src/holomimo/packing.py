"""Deterministic epsilon-ball capacity by sphere packing.

A line source radiating to a parallel observation line is discretized
into a compact linear operator; the bounded-energy source sphere maps to
an ellipsoid with semi-axes sigma_k * sqrt(E), and the number of disjoint
epsilon-balls packed inside it gives the deterministic capacity
log2(count).  An optional radiation-pattern constraint removes the modes
whose far-zone patterns leak outside an angular window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .emcore import CarrierConfig
from .errors import ValidationError

PACKING_DIM_DEFAULT = 2


@dataclass(frozen=True)
class LineLinkConfig:
    """Geometry (in wavelengths) and signal-set parameters of the line link."""

    energy_radius: float
    epsilon: float
    source_length: float = 10.0
    observation_length: float = 6.0
    separation: float = 10.0
    source_points: int = 128
    observation_points: int = 96

    def __post_init__(self):
        if min(self.source_length, self.observation_length, self.separation) <= 0:
            raise ValidationError("lengths and separation must be positive")
        if self.source_points < 2 or self.observation_points < 2:
            raise ValidationError("need at least two sample points per line")
        if self.epsilon <= 0:
            raise ValidationError("epsilon must be positive")
        if self.energy_radius < 0:
            raise ValidationError("energy radius must be non-negative")


@dataclass(frozen=True)
class PatternConstraint:
    """Angular window and the tolerated relative pattern magnitude outside it."""

    angular_window_rad: tuple
    leakage_threshold: float
    grid_step_deg: float = 1.0

    def __post_init__(self):
        lo, hi = self.angular_window_rad
        if not lo < hi:
            raise ValidationError("window must satisfy low < high")
        if not (-np.pi / 2 < lo and hi < np.pi / 2):
            raise ValidationError("window must lie inside (-pi/2, pi/2)")
        if self.leakage_threshold < 0:
            raise ValidationError("leakage threshold must be non-negative")
        if self.grid_step_deg <= 0:
            raise ValidationError("angular grid step must be positive")


@dataclass(frozen=True)
class PackingResult:
    ball_count: int
    capacity_bits: float
    removed_by_constraint: int


def _source_abscissas(cfg: LineLinkConfig, wavelength: float) -> np.ndarray:
    length = cfg.source_length * wavelength
    return (np.arange(cfg.source_points) + 0.5) * length / cfg.source_points - length / 2.0


def build_line_operator(cfg: LineLinkConfig, carrier: CarrierConfig) -> np.ndarray:
    """Discretized source-line to observation-line operator.

    Midpoint samples on both lines; entry (m, n) is the scalar Green's
    kernel between observation point m and source point n times the
    symmetric quadrature weight sqrt(ds * do), which makes the matrix the
    operator in energy (L2) coordinates so its singular values converge
    under refinement.
    """
    lam = carrier.wavelength_m
    k0 = carrier.wavenumber_rad_per_m
    xs = _source_abscissas(cfg, lam)
    lo = cfg.observation_length * lam
    xo = (np.arange(cfg.observation_points) + 0.5) * lo / cfg.observation_points - lo / 2.0
    sep = cfg.separation * lam
    diff = xo[:, None] - xs[None, :]
    dist = np.sqrt(diff**2 + sep**2)
    if np.any(dist <= 0.0):
        raise ValidationError("source and observation samples coincide")
    g = np.exp(-1j * k0 * dist) / (4 * np.pi * dist)
    ds = cfg.source_length * lam / cfg.source_points
    do = cfg.observation_length * lam / cfg.observation_points
    return g * np.sqrt(ds * do)


def ellipsoid_semiaxes(op: np.ndarray, energy_radius: float) -> np.ndarray:
    """Semi-axes sigma_k * energy_radius of the image ellipsoid, descending."""
    arr = np.asarray(op)
    if not np.all(np.isfinite(arr)):
        raise ValidationError("operator entries must be finite")
    if energy_radius < 0:
        raise ValidationError("energy radius must be non-negative")
    return np.linalg.svd(arr, compute_uv=False) * energy_radius


def pack_epsilon_balls(semiaxes, epsilon: float, dim: int) -> int:
    """Count disjoint epsilon-balls with centres on a cubic lattice of pitch 2 eps.

    Centres are lattice points inside the ellipsoid restricted to its
    top ``dim`` axes; adjacent centres are 2 eps apart so the balls are
    pairwise disjoint by construction.  The origin always packs, so a
    nonempty ellipsoid yields at least one ball.  This is a guaranteed
    valid packing, hence a lower bound on the maximum count.
    """
    if dim < 1:
        raise ValidationError("dim must be at least 1")
    axes = np.sort(np.asarray(semiaxes, dtype=float))[::-1]
    if dim > axes.size:
        raise ValidationError("dim exceeds the number of semi-axes")
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    top = axes[:dim]
    top = top[top > 0.0]
    if top.size == 0:
        return 1
    pitch = 2.0 * epsilon
    ranges = [np.arange(-int(np.floor(a / pitch)), int(np.floor(a / pitch)) + 1) for a in top]
    grids = np.meshgrid(*ranges, indexing="ij")
    lhs = np.zeros(grids[0].shape)
    for g, a in zip(grids, top):
        lhs += (pitch * g / a) ** 2
    return int(np.count_nonzero(lhs <= 1.0))


@dataclass(frozen=True)
class ModePattern:
    """Per-mode pattern summary emitted by the constraint filter."""

    index: int
    semiaxis: float
    kept: bool
    peak_leakage: float


def pattern_mode_report(op: np.ndarray, cfg: LineLinkConfig, constraint: PatternConstraint,
                        carrier: CarrierConfig) -> list[ModePattern]:
    """Far-zone pattern compliance of each significant right-singular excitation.

    Modes whose semi-axis reaches the ball radius epsilon count as
    distinguishable and are pattern-checked; for each, the array-factor
    magnitude over a uniform angular grid (-90..90 deg) outside the
    window, relative to the mode's own peak, is compared against the
    leakage threshold.
    """
    arr = np.asarray(op)
    _, sv, vh = np.linalg.svd(arr, full_matrices=False)
    semi = sv * cfg.energy_radius
    significant = semi >= cfg.epsilon

    step = constraint.grid_step_deg
    angles = np.deg2rad(np.arange(-90.0, 90.0 + step / 2, step))
    if angles.size == 0:
        raise ValidationError("empty angular grid")
    lo, hi = constraint.angular_window_rad
    outside = (angles < lo) | (angles > hi)

    xs = _source_abscissas(cfg, carrier.wavelength_m)
    steering = np.exp(-1j * carrier.wavenumber_rad_per_m * np.outer(np.sin(angles), xs))
    report = []
    for k in np.flatnonzero(significant):
        pattern = np.abs(steering @ vh[k].conj())
        peak = pattern.max()
        if peak == 0.0:
            leakage = 0.0
        elif not np.any(outside):
            leakage = 0.0
        else:
            leakage = float(pattern[outside].max() / peak)
        kept = leakage <= constraint.leakage_threshold
        report.append(ModePattern(index=int(k), semiaxis=float(semi[k]),
                                  kept=kept, peak_leakage=leakage))
    return report


def pattern_constraint_filter(op: np.ndarray, cfg: LineLinkConfig,
                              constraint: PatternConstraint,
                              carrier: CarrierConfig):
    """Surviving semi-axes (descending) and the count removed by the constraint."""
    report = pattern_mode_report(op, cfg, constraint, carrier)
    kept = np.array(sorted((m.semiaxis for m in report if m.kept), reverse=True))
    removed = sum(1 for m in report if not m.kept)
    return kept, removed


def epsilon_capacity(cfg: LineLinkConfig, carrier: CarrierConfig,
                     constraint: Optional[PatternConstraint] = None,
                     dim: int = PACKING_DIM_DEFAULT) -> PackingResult:
    """Full pipeline: operator, ellipsoid, optional pattern filter, packing."""
    op = build_line_operator(cfg, carrier)
    removed = 0
    if constraint is None:
        semiaxes = ellipsoid_semiaxes(op, cfg.energy_radius)
    else:
        semiaxes, removed = pattern_constraint_filter(op, cfg, constraint, carrier)
    use_dim = min(dim, semiaxes.size) if semiaxes.size else 1
    if semiaxes.size == 0:
        count = 1
    else:
        count = pack_epsilon_balls(semiaxes, cfg.epsilon, use_dim)
    bits = float(np.log2(count)) if count >= 1 else 0.0
    return PackingResult(ball_count=count, capacity_bits=bits, removed_by_constraint=removed)
