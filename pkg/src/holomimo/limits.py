"""Closed-form antenna physical limits.

Maximum directivity and minimum quality factor for an antenna enclosed in
a sphere (single-mode and TE+TM variants), the area-law element gain of a
dense array with its embedded-efficiency reductions, and the sectored
beam-alignment pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .emcore import CarrierConfig
from .errors import ValidationError

_GL_ORDER = 64  # fixed Gauss-Legendre grid for the reflection integral


@dataclass(frozen=True)
class SphereEnclosure:
    """Enclosing sphere of an antenna: physical radius and electrical size k0*r."""

    radius_m: float
    electrical_size: float

    def __post_init__(self):
        if self.radius_m <= 0 or self.electrical_size <= 0:
            raise ValidationError("sphere radius and electrical size must be positive")

    @classmethod
    def from_radius(cls, radius_m: float, carrier: CarrierConfig) -> "SphereEnclosure":
        return cls(radius_m=radius_m, electrical_size=carrier.wavenumber_rad_per_m * radius_m)

    @classmethod
    def from_electrical_size(cls, electrical_size: float, carrier: CarrierConfig) -> "SphereEnclosure":
        return cls(radius_m=electrical_size / carrier.wavenumber_rad_per_m,
                   electrical_size=electrical_size)


def chu_gain(enc: SphereEnclosure) -> float:
    """Single-mode-family maximum directivity (k0 r)^2 + k0 r.

    Accurate for electrical sizes above about 3; computed for any
    positive size without clipping.
    """
    x = enc.electrical_size
    return x * x + x


def chu_q(enc: SphereEnclosure) -> float:
    """Minimum quality factor 1/(k0 r)^3 + 1/(k0 r) with one spherical mode active."""
    x = enc.electrical_size
    return 1.0 / x**3 + 1.0 / x


def harrington_gain(enc: SphereEnclosure) -> float:
    """Maximum directivity (k0 r)^2 + 2 k0 r with both TE and TM modes active."""
    x = enc.electrical_size
    return x * x + 2.0 * x


def harrington_q(enc: SphereEnclosure) -> float:
    """Minimum quality factor 1/(2 (k0 r)^3) + 1/(k0 r) for combined TE+TM excitation."""
    x = enc.electrical_size
    return 0.5 / x**3 + 1.0 / x


@dataclass(frozen=True)
class ElementAllotment:
    """Area allotted to one array element and the scan angle of interest."""

    area_m2: float
    scan_angle_rad: float

    def __post_init__(self):
        if self.area_m2 <= 0:
            raise ValidationError("element area must be positive")
        if not 0.0 <= self.scan_angle_rad < np.pi / 2:
            raise ValidationError("scan angle must lie in [0, pi/2)")


def hannan_gain(alloc: ElementAllotment, carrier: CarrierConfig) -> float:
    """Area-law element directivity (4 pi A / lambda^2) cos(theta)."""
    lam = carrier.wavelength_m
    return 4.0 * np.pi * alloc.area_m2 / lam**2 * np.cos(alloc.scan_angle_rad)


def realized_gain(alloc: ElementAllotment, carrier: CarrierConfig, efficiency: float) -> float:
    """Element gain after the embedded-efficiency reduction.

    ``efficiency`` is the embedded element efficiency in [0, 1]; the ideal
    half-wavelength element in an infinite array has pi/4, which turns the
    directivity 4 into the classic realized gain pi.
    """
    if not 0.0 <= efficiency <= 1.0:
        raise ValidationError("efficiency must lie in [0, 1]")
    return hannan_gain(alloc, carrier) * efficiency


def max_element_efficiency(area_m2: float, wavelength_m: float) -> float:
    """Upper bound pi A / lambda^2 on dense-array element efficiency.

    Stated for the half-wavelength allotment (it is the realized gain
    divided by the isolated-element directivity 4); treat values for
    other allotments as indicative only.
    """
    if area_m2 <= 0 or wavelength_m <= 0:
        raise ValidationError("area and wavelength must be positive")
    return np.pi * area_m2 / wavelength_m**2


def embedded_efficiency_reflection(reflection: Callable[[float, float], complex]) -> float:
    """Embedded efficiency 1 - (1/pi^2) * integral of |R(alpha, beta)|^2 over [0, pi]^2.

    ``reflection`` is the active reflection coefficient versus the two
    excitation phasings; it must satisfy |R| <= 1.  The integral uses a
    fixed 64x64 Gauss-Legendre grid so results are deterministic.
    """
    nodes, weights = np.polynomial.legendre.leggauss(_GL_ORDER)
    x = 0.5 * np.pi * (nodes + 1.0)
    w = 0.5 * np.pi * weights
    total = 0.0
    for ai, wa in zip(x, w):
        row = np.array([abs(reflection(ai, bj)) for bj in x])
        if np.any(row > 1.0 + 1e-12):
            raise ValidationError("reflection coefficient magnitude exceeds 1")
        total += wa * np.sum(w * row**2)
    return 1.0 - total / np.pi**2


def embedded_efficiency_sparams(s_row: Sequence[complex]) -> float:
    """Embedded efficiency 1 - sum |S_ij|^2 from one row of the scattering matrix."""
    mags = np.abs(np.asarray(list(s_row), dtype=complex))
    power = float(np.sum(mags**2))
    if power > 1.0 + 1e-12:
        raise ValidationError("scattering row is not passive: sum |S_ij|^2 > 1")
    return 1.0 - min(power, 1.0)


@dataclass(frozen=True)
class SectoredPattern:
    """Flat-top gain pattern: gain_max inside the beamwidth, gain_min outside."""

    gain_max: float
    gain_min: float
    beamwidth_rad: float

    def __post_init__(self):
        if not (self.gain_max >= self.gain_min >= 0.0):
            raise ValidationError("require gain_max >= gain_min >= 0")
        if self.beamwidth_rad <= 0:
            raise ValidationError("beamwidth must be positive")


def sectored_gain(pattern: SectoredPattern, angle_rad: float) -> float:
    """Gain at the given angle; the beamwidth boundary is inclusive."""
    if abs(angle_rad) <= pattern.beamwidth_rad:
        return pattern.gain_max
    return pattern.gain_min
