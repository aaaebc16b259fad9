"""Eigen-spectra, degrees of freedom, and capacity measures.

Everything downstream of a channel matrix lives here: singular spectrum
extraction, truncation and closed-form DOF counts, uniform/waterfilling
capacities with the near-field upper bound, linear-precoder spectral
efficiencies, and the probabilistic/deterministic SNR definitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelMatrix, PlanarAperture
from .emcore import CarrierConfig
from .errors import ValidationError

DOF_TRUNCATION_DEFAULT = 0.01  # relative power threshold sigma_k^2 / sigma_1^2


@dataclass(frozen=True)
class EigenSpectrum:
    """Descending singular values of a channel matrix or discretized operator."""

    singular_values: np.ndarray = field(repr=False)
    rows: int
    cols: int
    u: np.ndarray | None = field(default=None, repr=False)
    vh: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        sv = np.asarray(self.singular_values, dtype=float)
        if np.any(sv < 0) or np.any(np.diff(sv) > 0):
            raise ValidationError("singular values must be non-negative and descending")
        if sv.size != min(self.rows, self.cols):
            raise ValidationError("expected min(rows, cols) singular values")
        object.__setattr__(self, "singular_values", sv)

    def reconstruct(self) -> np.ndarray:
        """Multiply the retained factors back together."""
        if self.u is None or self.vh is None:
            raise ValidationError("spectrum was computed without factors")
        return (self.u * self.singular_values) @ self.vh


@dataclass(frozen=True)
class DofEstimate:
    count: float
    threshold: float
    method: str


@dataclass(frozen=True)
class CapacityResult:
    """Capacity in bits/s/Hz with the per-mode power allocation that achieved it."""

    bits_per_s_per_hz: float
    allocation: np.ndarray = field(repr=False)
    snr: float


def _entries(h) -> np.ndarray:
    if isinstance(h, ChannelMatrix):
        return h.entries
    return np.asarray(h, dtype=complex)


def rho_from_carrier(carrier: CarrierConfig) -> float:
    """Coupling constant (omega * mu)^2 linking current spectra to field power."""
    return (carrier.angular_frequency_rad_per_s * carrier.permeability) ** 2


def default_stream_count(h) -> int:
    """Default parallel-stream count: min port dimension of the channel.

    Polarized channels expose 3 ports per element, so this is min(3M, 3N)
    for those and min(M, N) for scalar channels.
    """
    arr = _entries(h)
    return int(min(arr.shape))


def singular_spectrum(h, keep_factors: bool = True) -> EigenSpectrum:
    """Full SVD of a channel matrix, singular values descending.

    Factors are retained for reconstruction checks unless ``keep_factors``
    is disabled (useful for large sweeps where only values matter).
    """
    arr = _entries(h)
    if arr.ndim != 2:
        raise ValidationError("expected a matrix")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("matrix entries must be finite")
    if keep_factors:
        u, sv, vh = np.linalg.svd(arr, full_matrices=False)
        return EigenSpectrum(singular_values=sv, rows=arr.shape[0], cols=arr.shape[1],
                             u=u, vh=vh)
    sv = np.linalg.svd(arr, compute_uv=False)
    return EigenSpectrum(singular_values=sv, rows=arr.shape[0], cols=arr.shape[1])


def effective_dof(spec: EigenSpectrum, epsilon: float = DOF_TRUNCATION_DEFAULT) -> DofEstimate:
    """Truncation DOF: number of modes with sigma_k^2 >= epsilon * sigma_1^2."""
    if not 0.0 < epsilon < 1.0:
        raise ValidationError("epsilon must lie in (0, 1)")
    sv = spec.singular_values
    if sv.size == 0 or sv[0] == 0.0:
        return DofEstimate(count=0, threshold=epsilon, method="truncation")
    count = int(np.sum(sv**2 >= epsilon * sv[0] ** 2))
    return DofEstimate(count=count, threshold=epsilon, method="truncation")


def temporal_dof(bandwidth_rad: float, duration_s: float) -> float:
    """Leading-order DOF B*T/pi of a time- and band-limited scalar signal."""
    if bandwidth_rad <= 0 or duration_s <= 0:
        raise ValidationError("bandwidth and duration must be positive")
    return bandwidth_rad * duration_s / np.pi


def spatial_dof_circular(frequency: float, normalized_radius: float) -> float:
    """Leading-order spatial DOF 2 f r~ of a field observed on a circular boundary."""
    if frequency * normalized_radius <= 0:
        raise ValidationError("frequency * radius must be positive")
    return frequency * 2.0 * np.pi * normalized_radius / np.pi


def landau_dof(bandwidth_rad: float, duration_s: float, normalized_radius: float) -> float:
    """Space-time DOF: the product (B T / pi) * (r~ B), leading order.

    The band-limited and time-limited forms share this leading term and
    differ only in the vanishing remainder.
    """
    if normalized_radius <= 0:
        raise ValidationError("normalized radius must be positive")
    return temporal_dof(bandwidth_rad, duration_s) * (normalized_radius * bandwidth_rad)


def minmax_spatial_dof(area_tx: float, solid_angle_tx: float,
                       area_rx: float, solid_angle_rx: float) -> float:
    """Link DOF min(A_t |O_t|, A_r |O_r|): the tighter of the two ends."""
    for v in (area_tx, solid_angle_tx, area_rx, solid_angle_rx):
        if v < 0:
            raise ValidationError("areas and solid angles must be non-negative")
    return min(area_tx * solid_angle_tx, area_rx * solid_angle_rx)


_BALL_VOLUMES = {1: 2.0, 2: np.pi, 3: 4.0 * np.pi / 3.0}


def ball_packing_dof(measure: float, delta_x: float, delta_y: float, delta_z: float,
                     dim: int) -> float:
    """Unit-ball packing count of a phase-space measure.

    Divides the space-spectrum measure by beta_dim times the product of
    the first ``dim`` half-resolutions (delta/2); beta is the unit-ball
    volume 2, pi, 4 pi/3 for dim 1, 2, 3.
    """
    if dim not in _BALL_VOLUMES:
        raise ValidationError("dim must be 1, 2, or 3")
    if measure < 0:
        raise ValidationError("measure must be non-negative")
    deltas = (delta_x, delta_y, delta_z)[:dim]
    if any(d <= 0 for d in deltas):
        raise ValidationError("resolutions must be positive")
    denom = _BALL_VOLUMES[dim] * float(np.prod([d / 2.0 for d in deltas]))
    return measure / denom


def capacity_uniform(spec: EigenSpectrum, snr: float, rho: float, streams: int) -> CapacityResult:
    """Uniform-allocation capacity sum log2(1 + rho * snr * gamma_p^2).

    ``snr`` is the per-stream transmit SNR and ``rho`` the field-coupling
    constant (pass 1 when the spectrum already includes it); the first
    ``streams`` modes carry data.
    """
    if snr < 0:
        raise ValidationError("snr must be non-negative")
    if streams < 0 or streams > spec.singular_values.size:
        raise ValidationError("streams must not exceed the spectrum length")
    gamma = spec.singular_values[:streams]
    bits = float(np.sum(np.log2(1.0 + rho * snr * gamma**2)))
    return CapacityResult(bits_per_s_per_hz=bits,
                          allocation=np.full(streams, float(snr)), snr=snr)


def _pair_distances(tx: PlanarAperture, rx: PlanarAperture) -> np.ndarray:
    diff = rx.element_centers[:, None, :] - tx.element_centers[None, :, :]
    d = np.linalg.norm(diff, axis=-1)
    if np.any(d <= 0.0):
        raise ValidationError("transmit and receive apertures overlap")
    return d


def distance_term_coefficients(tx: PlanarAperture, rx: PlanarAperture,
                               carrier: CarrierConfig) -> np.ndarray:
    """Per-pair coefficients (e1, e2, e3) of the 1/d^2, 1/d^4, 1/d^6 terms.

    Computed from the separation direction through the trace of the
    normalized outer product, which is identically 1, so
    e1 = 1/(8 pi^2) for every pair; the identity is asserted in tests
    rather than substituted silently.
    """
    diff = rx.element_centers[:, None, :] - tx.element_centers[None, :, :]
    d2 = np.sum(diff * diff, axis=-1)
    if np.any(d2 <= 0.0):
        raise ValidationError("transmit and receive apertures overlap")
    trace = np.einsum("mnc,mnc->mn", diff, diff) / d2
    k0 = carrier.wavenumber_rad_per_m
    e1 = (3.0 - trace) / (16.0 * np.pi**2)
    e2 = (5.0 * trace - 3.0) / (16.0 * np.pi**2 * k0**2)
    e3 = (3.0 * trace + 3.0) / (16.0 * np.pi**2 * k0**4)
    return np.stack([e1, e2, e3])


def capacity_upper_bound(tx: PlanarAperture, rx: PlanarAperture, carrier: CarrierConfig,
                         snr: float, streams: int, far_field: bool = False) -> float:
    """Closed-form upper bound on the LoS uniform-allocation capacity.

    P log2(1 + (rho snr / P) a_R a_T sum_mn (e1/d^2 + e2/d^4 + e3/d^6))
    over all element pairs.  ``far_field=True`` keeps only the 1/d^2 term,
    the variant valid beyond the Rayleigh distance where the higher-order
    distance terms vanish.
    """
    if snr < 0:
        raise ValidationError("snr must be non-negative")
    if streams < 1:
        raise ValidationError("need at least one stream")
    d = _pair_distances(tx, rx)
    e1, e2, e3 = distance_term_coefficients(tx, rx, carrier)
    total = e1 / d**2
    if not far_field:
        total = total + e2 / d**4 + e3 / d**6
    s = float(np.sum(total))
    rho = rho_from_carrier(carrier)
    a = rx.element_area_m2 * tx.element_area_m2
    return streams * float(np.log2(1.0 + (rho * snr / streams) * a * s))


def capacity_waterfilling(spec: EigenSpectrum, total_power: float, noise: float) -> CapacityResult:
    """Waterfilling allocation maximizing sum log2(1 + p_k gamma_k^2 / noise).

    The water level is located by bisection to 1e-12 relative accuracy
    and the allocation rescaled to meet the power budget exactly.
    """
    if total_power <= 0 or noise <= 0:
        raise ValidationError("total power and noise must be positive")
    gamma = spec.singular_values
    gains = gamma**2 / noise
    if gamma.size == 0 or np.all(gains == 0.0):
        return CapacityResult(bits_per_s_per_hz=0.0,
                              allocation=np.zeros(gamma.size), snr=total_power / noise)
    inv = np.where(gains > 0, 1.0 / np.where(gains > 0, gains, 1.0), np.inf)
    lo = 0.0
    hi = total_power + float(inv[np.isfinite(inv)].max())
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        used = np.sum(np.maximum(0.0, mid - inv))
        if used > total_power:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
    level = 0.5 * (lo + hi)
    alloc = np.maximum(0.0, level - inv)
    alloc[~np.isfinite(inv)] = 0.0
    used = alloc.sum()
    if used > 0:
        alloc *= total_power / used
    bits = float(np.sum(np.log2(1.0 + alloc * gains)))
    return CapacityResult(bits_per_s_per_hz=bits, allocation=alloc, snr=total_power / noise)


_PRECODER_KINDS = ("mrt", "zf", "mmse")


def precoder_spectral_efficiency(h, kind: str, snr: float) -> float:
    """Sum spectral efficiency of a linear precoder with equal per-stream power.

    Streams map to the rows of ``h`` (one per receive port); the total
    transmit SNR splits evenly across them against unit noise.  MRT uses
    the conjugate channel, ZF the right pseudo-inverse (requiring full
    row rank), MMSE the regularized inverse with loading K/snr.  Columns
    of the precoder are normalized per stream.
    """
    kind = kind.lower()
    if kind not in _PRECODER_KINDS:
        raise ValidationError(f"unknown precoder kind {kind!r}")
    if snr < 0:
        raise ValidationError("snr must be non-negative")
    arr = _entries(h)
    if not np.all(np.isfinite(arr)):
        raise ValidationError("channel entries must be finite")
    m, n = arr.shape
    if snr == 0.0:
        return 0.0
    if kind == "mrt":
        g = arr.conj().T
    else:
        gram = arr @ arr.conj().T
        if kind == "zf":
            rank = np.linalg.matrix_rank(arr)
            if rank < m:
                raise ValidationError(
                    f"zero-forcing undefined: channel rank {rank} is below the {m} streams")
            g = arr.conj().T @ np.linalg.inv(gram)
        else:
            g = arr.conj().T @ np.linalg.inv(gram + (m / snr) * np.eye(m))
    norms = np.linalg.norm(g, axis=0)
    if np.any(norms == 0.0):
        raise ValidationError("degenerate precoding column")
    g = g / norms
    eff = arr @ g
    p = snr / m
    signal = p * np.abs(np.diag(eff)) ** 2
    interference = p * (np.sum(np.abs(eff) ** 2, axis=1) - np.abs(np.diag(eff)) ** 2)
    return float(np.sum(np.log2(1.0 + signal / (1.0 + interference))))


def snr_sit(symbol_power: float, noise_sigma: float, n: int) -> float:
    """Probabilistic-model SNR (P N) / (sigma sqrt(N))^2 = P / sigma^2.

    The signal power grows as P*N while the uncertainty-ball radius grows
    as sigma*sqrt(N), so the dimension cancels exactly; the reduced form
    is returned to keep that cancellation exact in floating point.
    """
    if symbol_power <= 0 or noise_sigma <= 0 or n <= 0:
        raise ValidationError("power, noise, and dimension must be positive")
    return symbol_power / noise_sigma**2


def snr_kit(energy: float, epsilon: float) -> float:
    """Deterministic-model SNR E / eps^2 for energy-bounded signals."""
    if energy < 0 or epsilon <= 0:
        raise ValidationError("energy must be non-negative and epsilon positive")
    return energy / epsilon**2


def sinr_kit(energy: float, epsilon: float, interference: float) -> float:
    """Multi-user variant E / (eps^2 + I); interference adds to the uncertainty."""
    if interference < 0:
        raise ValidationError("interference must be non-negative")
    if energy < 0 or epsilon <= 0:
        raise ValidationError("energy must be non-negative and epsilon positive")
    return energy / (epsilon**2 + interference)
