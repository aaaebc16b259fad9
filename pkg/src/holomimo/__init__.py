"""Electromagnetic channel models, antenna limits, and information measures
for dense-aperture (holographic) MIMO links."""

from .emcore import (
    CarrierConfig,
    Point3,
    SPEED_OF_LIGHT,
    VACUUM_PERMEABILITY,
    dyadic_green,
    dyadic_green_terms,
    rayleigh_distance,
    scalar_green,
    weyl_evanescent,
    weyl_homogeneous,
)
from .errors import ConfigError, NumericalError, ValidationError

__all__ = [
    "CarrierConfig",
    "ConfigError",
    "NumericalError",
    "Point3",
    "SPEED_OF_LIGHT",
    "VACUUM_PERMEABILITY",
    "ValidationError",
    "dyadic_green",
    "dyadic_green_terms",
    "rayleigh_distance",
    "scalar_green",
    "weyl_evanescent",
    "weyl_homogeneous",
]

__version__ = "0.1.0"
