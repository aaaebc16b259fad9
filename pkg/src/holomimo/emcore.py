"""Free-space electromagnetic kernels.

Scalar and dyadic point-to-point Green's functions, their split into
propagating (homogeneous) and exponentially decaying (evanescent)
plane-wave integrals, and the Rayleigh near/far-field boundary.

Conventions: time dependence exp(+j w t), so an outgoing spherical wave
is exp(-j k0 d) / (4 pi d).  All lengths are metres.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import j0

from .errors import NumericalError, ValidationError

SPEED_OF_LIGHT = 299792458.0
VACUUM_PERMEABILITY = 4.0e-7 * np.pi

# quadrature targets for the plane-wave integrals
_QUAD_EPSABS = 1e-10
_QUAD_EPSREL = 1e-8
_EVANESCENT_CUTOFF = 1e-12


@dataclass(frozen=True)
class CarrierConfig:
    """Carrier frequency bundle anchoring every EM computation.

    Attributes
    ----------
    frequency_hz : float
        Carrier frequency f.
    wavelength_m : float
        Free-space wavelength lambda = c / f.
    wavenumber_rad_per_m : float
        k0 = 2 pi / lambda.
    angular_frequency_rad_per_s : float
        omega = 2 pi f.
    permeability : float
        Medium permeability mu (free-space value by default).
    """

    frequency_hz: float
    wavelength_m: float
    wavenumber_rad_per_m: float
    angular_frequency_rad_per_s: float
    permeability: float = VACUUM_PERMEABILITY

    def __post_init__(self):
        for name in ("frequency_hz", "wavelength_m", "wavenumber_rad_per_m", "permeability"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be positive")
        if abs(self.wavenumber_rad_per_m * self.wavelength_m - 2 * np.pi) > 1e-12 * 2 * np.pi:
            raise ValidationError("wavenumber * wavelength must equal 2*pi")
        omega = 2 * np.pi * self.frequency_hz
        if abs(self.angular_frequency_rad_per_s - omega) > 1e-12 * omega:
            raise ValidationError("angular frequency must equal 2*pi*frequency")

    @classmethod
    def from_frequency(cls, frequency_hz: float, permeability: float = VACUUM_PERMEABILITY) -> "CarrierConfig":
        if frequency_hz <= 0:
            raise ValidationError("frequency must be positive")
        wavelength = SPEED_OF_LIGHT / frequency_hz
        return cls(
            frequency_hz=frequency_hz,
            wavelength_m=wavelength,
            wavenumber_rad_per_m=2 * np.pi / wavelength,
            angular_frequency_rad_per_s=2 * np.pi * frequency_hz,
            permeability=permeability,
        )


@dataclass(frozen=True)
class Point3:
    """Cartesian point in metres."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(np.isfinite((self.x, self.y, self.z))):
            raise ValidationError("point components must be finite")

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


def as_xyz(point) -> np.ndarray:
    """Accept a Point3 or any (3,) array-like and return a float array."""
    if isinstance(point, Point3):
        return point.to_array()
    arr = np.asarray(point, dtype=float)
    if arr.shape != (3,):
        raise ValidationError("expected a 3-component point")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("point components must be finite")
    return arr


def scalar_green(r, rp, carrier: CarrierConfig) -> complex:
    """Scalar free-space Green's function exp(-j k0 d) / (4 pi d).

    Depends on the source-field separation d = |r - rp| only; coincident
    points are a domain error (the kernel is singular there).
    """
    d = float(np.linalg.norm(as_xyz(r) - as_xyz(rp)))
    if d <= 0.0:
        raise ValidationError("scalar Green's function is singular at coincident points")
    k0 = carrier.wavenumber_rad_per_m
    return complex(np.exp(-1j * k0 * d) / (4 * np.pi * d))


def dyadic_radial_coefficients(kd):
    """Closed-form radial coefficients of the free-space dyad.

    Returns (transverse, longitudinal) coefficients A and B such that
    G = (A*I + B*outer(dhat, dhat)) * g(d), with

        A = 1 - j/(k0 d) - 1/(k0 d)^2
        B = -1 + 3j/(k0 d) + 3/(k0 d)^2

    obtained by applying (I + grad grad / k0^2) to the scalar kernel
    analytically; numerical differentiation of the oscillatory kernel is
    unstable and deliberately avoided.
    """
    kd = np.asarray(kd, dtype=float)
    inv = 1.0 / kd
    a = 1.0 - 1j * inv - inv**2
    b = -1.0 + 3j * inv + 3.0 * inv**2
    return a, b


def pairwise_dyadic(rx_points: np.ndarray, tx_points: np.ndarray, carrier: CarrierConfig) -> np.ndarray:
    """Dyadic Green's function for every (receive, transmit) point pair.

    Parameters
    ----------
    rx_points, tx_points : ndarray, shape (M, 3) / (N, 3)
    carrier : CarrierConfig

    Returns
    -------
    ndarray, shape (M, N, 3, 3), complex
    """
    rx = np.atleast_2d(np.asarray(rx_points, dtype=float))
    tx = np.atleast_2d(np.asarray(tx_points, dtype=float))
    diff = rx[:, None, :] - tx[None, :, :]
    d = np.linalg.norm(diff, axis=-1)
    if np.any(d <= 0.0):
        raise ValidationError("dyadic Green's function is singular at coincident points")
    dhat = diff / d[..., None]
    k0 = carrier.wavenumber_rad_per_m
    g = np.exp(-1j * k0 * d) / (4 * np.pi * d)
    a, b = dyadic_radial_coefficients(k0 * d)
    outer = dhat[..., :, None] * dhat[..., None, :]
    return (a[..., None, None] * np.eye(3) + b[..., None, None] * outer) * g[..., None, None]


def dyadic_green(r, rp, carrier: CarrierConfig) -> np.ndarray:
    """Point-to-point dyadic Green's function, 3x3 complex.

    Rows and columns are indexed by Cartesian polarization (x, y, z).
    Satisfies reciprocity G(r, rp) = G(rp, r)^T.
    """
    return pairwise_dyadic(as_xyz(r)[None, :], as_xyz(rp)[None, :], carrier)[0, 0]


def dyadic_green_terms(r, rp, carrier: CarrierConfig):
    """The dyad split by radial order: (1/d, 1/d^2, 1/d^3) terms.

    The three 3x3 arrays sum to ``dyadic_green(r, rp, carrier)``.  The
    leading term is the transverse radiated field (I - dhat dhat^T); the
    higher-order terms carry the reactive near field.
    """
    rv = as_xyz(r)
    rpv = as_xyz(rp)
    diff = rv - rpv
    d = float(np.linalg.norm(diff))
    if d <= 0.0:
        raise ValidationError("dyadic Green's function is singular at coincident points")
    dhat = diff / d
    k0 = carrier.wavenumber_rad_per_m
    kd = k0 * d
    g = np.exp(-1j * kd) / (4 * np.pi * d)
    eye = np.eye(3)
    outer = np.outer(dhat, dhat)
    term_rad = (eye - outer) * g
    term_mid = (-1j / kd) * (eye - 3.0 * outer) * g
    term_near = (-1.0 / kd**2) * (eye - 3.0 * outer) * g
    return term_rad, term_mid, term_near


def _complex_quad(fun, lo, hi):
    re, re_err = quad(lambda v: fun(v).real, lo, hi,
                      epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=400)
    im, im_err = quad(lambda v: fun(v).imag, lo, hi,
                      epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=400)
    val = re + 1j * im
    err = np.hypot(re_err, im_err)
    if err > max(_QUAD_EPSABS * 10, _QUAD_EPSREL * 10 * abs(val)) and err > 1e-9 * max(1.0, abs(val)):
        raise NumericalError(f"plane-wave quadrature did not converge; residual {err:.3e}")
    return val, err


def weyl_homogeneous(x: float, y: float, z: float, carrier: CarrierConfig) -> complex:
    """Propagating (homogeneous) part of the Weyl plane-wave split.

    Evaluates  -j k0 * int_0^1 exp(-j a v) J0(b sqrt(1 - v^2)) dv  with
    a = k0 |z| and b = k0 sqrt(x^2 + y^2), the polar reduction of the
    plane-wave integral over the propagating disk.  Depends on (x, y)
    only through b, hence is invariant under in-plane rotations.
    """
    if x == 0.0 and y == 0.0 and z == 0.0:
        raise ValidationError("Weyl integrals are singular at the origin")
    k0 = carrier.wavenumber_rad_per_m
    alpha = k0 * abs(z)
    beta = k0 * float(np.hypot(x, y))
    val, _ = _complex_quad(
        lambda v: np.exp(-1j * alpha * v) * j0(beta * np.sqrt(1.0 - v * v)), 0.0, 1.0)
    return complex(-1j * k0 * val)


def weyl_evanescent(x: float, y: float, z: float, carrier: CarrierConfig) -> float:
    """Decaying (evanescent) part of the Weyl plane-wave split.

    Evaluates  k0 * int_0^inf exp(-a v) J0(b sqrt(v^2 + 1)) dv  with the
    same a, b as :func:`weyl_homogeneous`.  The integrand is real, so the
    result is real.  The integral converges only off the source plane;
    z = 0 is a domain error.  The upper limit is truncated where the
    exponential falls below 1e-12.
    """
    if z == 0.0:
        raise ValidationError("evanescent integral diverges on the z = 0 plane")
    k0 = carrier.wavenumber_rad_per_m
    alpha = k0 * abs(z)
    beta = k0 * float(np.hypot(x, y))
    vmax = -np.log(_EVANESCENT_CUTOFF) / alpha
    val, err = quad(lambda v: np.exp(-alpha * v) * j0(beta * np.sqrt(v * v + 1.0)),
                    0.0, vmax, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=800)
    if err > max(_QUAD_EPSABS * 10, _QUAD_EPSREL * 10 * abs(val)) and err > 1e-9 * max(1.0, abs(val)):
        raise NumericalError(f"evanescent quadrature did not converge; residual {err:.3e}")
    return k0 * val


def rayleigh_distance(aperture_diameter_m: float, carrier: CarrierConfig) -> float:
    """Near/far-field boundary 2 D^2 / lambda for an aperture of diameter D."""
    if aperture_diameter_m <= 0:
        raise ValidationError("aperture diameter must be positive")
    return 2.0 * aperture_diameter_m**2 / carrier.wavelength_m
