"""Config-driven experiment runners behind the command-line interface.

Each experiment reproduces one family of reference curves as a CSV table
plus an SVG figure in the output directory.  Every parameter is read from
an INI config (shipped defaults under ``configs/``); randomized runners
derive per-trial seeds from the master seed by counter and reduce in a
fixed order, so outputs are byte-identical across runs and worker counts.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from . import channels, infomeasure, limits, packing, reporting
from .emcore import CarrierConfig
from .errors import ConfigError, NumericalError


# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    name: str
    carrier: CarrierConfig
    sections: dict
    seed: int
    out_dir: Path

    def _raw(self, section: str, key: str) -> str:
        try:
            return self.sections[section][key]
        except KeyError:
            raise ConfigError(f"missing config value [{section}] {key}") from None

    def get_float(self, section: str, key: str) -> float:
        raw = self._raw(section, key)
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not a number") from None

    def get_int(self, section: str, key: str) -> int:
        raw = self._raw(section, key)
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer") from None

    def get_floats(self, section: str, key: str) -> list:
        raw = self._raw(section, key)
        try:
            return [float(tok) for tok in raw.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not a number list") from None

    def get_ints(self, section: str, key: str) -> list:
        raw = self._raw(section, key)
        try:
            return [int(tok) for tok in raw.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer list") from None


def default_config_text(name: str) -> str:
    ref = resources.files("holomimo") / "configs" / f"{name}.ini"
    if not ref.is_file():
        raise ConfigError(f"no shipped config for experiment {name!r}")
    return ref.read_text(encoding="utf-8")


def parse_config(name: str, text: str, out_dir, seed_override=None) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    sections = {s: dict(parser.items(s)) for s in parser.sections()}
    if "carrier" not in sections or "frequency_hz" not in sections["carrier"]:
        raise ConfigError("config must provide [carrier] frequency_hz")
    try:
        carrier = CarrierConfig.from_frequency(float(sections["carrier"]["frequency_hz"]))
    except ValueError as exc:
        raise ConfigError(f"bad carrier frequency: {exc}") from None
    seed = int(sections.get("run", {}).get("seed", 42))
    if seed_override is not None:
        seed = int(seed_override)
    return ExperimentConfig(name=name, carrier=carrier, sections=sections,
                            seed=seed, out_dir=Path(out_dir))


def load_config(name: str, config_path=None, out_dir=".", seed_override=None) -> ExperimentConfig:
    if config_path is None:
        text = default_config_text(name)
    else:
        path = Path(config_path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        text = path.read_text(encoding="utf-8")
    return parse_config(name, text, out_dir=out_dir, seed_override=seed_override)


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _distance_grid(cfg: ExperimentConfig, lam: float):
    max_d = cfg.get_float("autocorrelation", "max_distance_wavelengths")
    n = cfg.get_int("autocorrelation", "n_distances")
    return np.linspace(0.0, max_d * lam, n)


def _autocorr_outputs(cfg: ExperimentConfig, distances, curve):
    lam = cfg.carrier.wavelength_m
    kernel = [channels.clarke_autocorrelation(d, cfg.carrier) for d in distances]
    d_wl = np.asarray(distances) / lam
    csv_path = cfg.out_dir / f"{cfg.name}.csv"
    svg_path = cfg.out_dir / f"{cfg.name}.svg"
    reporting.write_xy_csv(csv_path, "distance_wavelengths", d_wl,
                           {"model_correlation": curve, "closed_form_kernel": kernel})
    reporting.save_line_plot(svg_path, d_wl,
                             {"model": curve, "closed-form kernel": kernel},
                             xlabel="antenna separation (wavelengths)",
                             ylabel="autocorrelation")
    return {"csv": csv_path, "svg": svg_path,
            "max_abs_deviation": float(np.max(np.abs(np.asarray(curve) - np.asarray(kernel))))}


def _normalized_mean_eigs(cfg: ExperimentConfig, spacing_wl: float):
    """Mean normalized squared singular values of the plane-wave channel."""
    carrier = cfg.carrier
    lam = carrier.wavelength_m
    tx = channels.square_aperture(cfg.get_float("geometry", "tx_side_wavelengths") * lam,
                                  cfg.get_int("geometry", "tx_per_side"))
    n_rx = cfg.get_int("geometry", "rx_per_side")
    sep = cfg.get_float("geometry", "separation_wavelengths") * lam
    rx = channels.square_aperture(n_rx * spacing_wl * lam, n_rx, center=(0.0, 0.0, sep))
    spectrum = channels.isotropic_spectrum(
        carrier, cfg.get_float("spectrum", "side_wavelengths") * lam)
    trials = cfg.get_int("monte_carlo", "n_realizations")
    acc = None
    for t in range(trials):
        trial_seed = int(np.random.default_rng([cfg.seed, t]).integers(0, 2**63 - 1))
        h = channels.fourier_planewave_channel(tx, rx, spectrum.with_seed(trial_seed))
        arr = h.entries
        arr = arr * np.sqrt(arr.size) / np.linalg.norm(arr)
        sv2 = np.linalg.svd(arr, compute_uv=False) ** 2
        acc = sv2 if acc is None else acc + sv2
    return acc / trials


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------

def run_limits(cfg: ExperimentConfig) -> dict:
    start = cfg.get_float("sweep", "start")
    stop = cfg.get_float("sweep", "stop")
    points = cfg.get_int("sweep", "points")
    sizes = np.linspace(start, stop, points)
    encs = [limits.SphereEnclosure.from_electrical_size(x, cfg.carrier) for x in sizes]
    g_chu = [limits.chu_gain(e) for e in encs]
    g_harr = [limits.harrington_gain(e) for e in encs]
    q_chu = [limits.chu_q(e) for e in encs]
    q_harr = [limits.harrington_q(e) for e in encs]
    csv_path = cfg.out_dir / f"{cfg.name}.csv"
    svg_path = cfg.out_dir / f"{cfg.name}.svg"
    reporting.write_xy_csv(csv_path, "k0re", sizes,
                           {"G_chu": g_chu, "G_harr": g_harr,
                            "Q_chu": q_chu, "Q_harr": q_harr})
    reporting.save_panel_plot(
        svg_path,
        [("maximum directivity gain", sizes,
          {"single-mode bound": g_chu, "TE+TM bound": g_harr}, False),
         ("minimum quality factor", sizes,
          {"single-mode bound": q_chu, "TE+TM bound": q_harr}, True)],
        xlabel="electrical size k0*r",
        shade_below=(3.0, "gain bounds indicative below k0*r = 3"))
    return {"csv": csv_path, "svg": svg_path}


def run_autocorr_fourier(cfg: ExperimentConfig) -> dict:
    lam = cfg.carrier.wavelength_m
    distances = _distance_grid(cfg, lam)
    side = cfg.get_float("autocorrelation", "spectrum_side_wavelengths") * lam
    spectrum = channels.isotropic_spectrum(cfg.carrier, side)
    points = np.zeros((1 + distances.size, 3))
    points[1:, 0] = distances
    sampler = channels.fourier_field_sampler(spectrum, points)
    trials = cfg.get_int("autocorrelation", "trials")
    pairs = channels.empirical_autocorrelation(sampler, distances, trials, master_seed=cfg.seed)
    return _autocorr_outputs(cfg, distances, [c for _, c in pairs])


def run_autocorr_dyadic(cfg: ExperimentConfig) -> dict:
    lam = cfg.carrier.wavelength_m
    distances = _distance_grid(cfg, lam)
    points = np.zeros((1 + distances.size, 3))
    points[1:, 0] = distances
    sampler = channels.scatter_field_sampler(
        cfg.carrier, points,
        n_sources=cfg.get_int("autocorrelation", "n_sources"),
        sphere_radius_m=cfg.get_float("autocorrelation", "sphere_radius_wavelengths") * lam)
    trials = cfg.get_int("autocorrelation", "trials")
    pairs = channels.empirical_autocorrelation(sampler, distances, trials, master_seed=cfg.seed)
    return _autocorr_outputs(cfg, distances, [c for _, c in pairs])


def run_dof_saturation(cfg: ExperimentConfig) -> dict:
    carrier = cfg.carrier
    lam = carrier.wavelength_m
    side = cfg.get_float("geometry", "aperture_side_wavelengths") * lam
    distances = cfg.get_floats("geometry", "distances_wavelengths")
    per_side = cfg.get_ints("sweep", "elements_per_side")
    eps = cfg.get_float("dof", "truncation_epsilon")
    counts = [n * n for n in per_side]
    series = {}
    for r_wl in distances:
        row = []
        for n in per_side:
            tx = channels.square_aperture(side, n)
            rx = channels.square_aperture(side, n, center=(0.0, 0.0, r_wl * lam))
            h = channels.los_dyadic_channel(tx, rx, carrier)
            spec = infomeasure.singular_spectrum(h, keep_factors=False)
            row.append(infomeasure.effective_dof(spec, eps).count)
        series[f"dof_r{r_wl:g}"] = row
    csv_path = cfg.out_dir / f"{cfg.name}.csv"
    svg_path = cfg.out_dir / f"{cfg.name}.svg"
    reporting.write_xy_csv(csv_path, "element_count", counts, series)
    reporting.save_line_plot(svg_path, counts,
                             {k.replace("dof_r", "r = ") + " wavelengths": v
                              for k, v in series.items()},
                             xlabel="transmit elements in the fixed surface",
                             ylabel="effective DOF")
    return {"csv": csv_path, "svg": svg_path, "counts": counts, "series": series}


def _spacing_label(spacing_wl: float) -> str:
    return f"spacing_{spacing_wl:.4f}"


def run_eigen_spacing(cfg: ExperimentConfig) -> dict:
    spacings = cfg.get_floats("geometry", "rx_spacings_wavelengths")
    eps = cfg.get_float("dof", "truncation_epsilon")
    series = {}
    dof_counts = {}
    for sp in spacings:
        eigs = _normalized_mean_eigs(cfg, sp)
        series[_spacing_label(sp)] = eigs
        dof_counts[_spacing_label(sp)] = float(np.sum(eigs >= eps * eigs[0]))
    idx = np.arange(1, len(next(iter(series.values()))) + 1)
    csv_path = cfg.out_dir / f"{cfg.name}.csv"
    svg_path = cfg.out_dir / f"{cfg.name}.svg"
    reporting.write_xy_csv(csv_path, "mode_index", idx, series)
    reporting.save_line_plot(svg_path, idx,
                             {k.replace("spacing_", "spacing ") + " wavelengths": v
                              for k, v in series.items()},
                             xlabel="eigenvalue index", ylabel="mean normalized eigenvalue",
                             logy=True)
    return {"csv": csv_path, "svg": svg_path, "series": series, "dof_counts": dof_counts}


def run_capacity_spacing(cfg: ExperimentConfig) -> dict:
    spacings = cfg.get_floats("geometry", "rx_spacings_wavelengths")
    snr_db = np.asarray(cfg.get_floats("sweep", "snr_db"))
    series = {}
    for sp in spacings:
        eigs = _normalized_mean_eigs(cfg, sp)
        k = eigs.size
        caps = [float(np.sum(np.log2(1.0 + (10 ** (s / 10) / k) * eigs))) for s in snr_db]
        series[f"capacity_{_spacing_label(sp)}"] = caps
    csv_path = cfg.out_dir / f"{cfg.name}.csv"
    svg_path = cfg.out_dir / f"{cfg.name}.svg"
    reporting.write_xy_csv(csv_path, "snr_db", snr_db, series)
    reporting.save_line_plot(svg_path, snr_db,
                             {k.replace("capacity_spacing_", "spacing ") + " wavelengths": v
                              for k, v in series.items()},
                             xlabel="SNR (dB)", ylabel="capacity (bits/s/Hz)")
    return {"csv": csv_path, "svg": svg_path, "series": series}


def run_polarization_spectrum(cfg: ExperimentConfig) -> dict:
    carrier = cfg.carrier
    lam = carrier.wavelength_m
    side = cfg.get_float("geometry", "aperture_side_wavelengths") * lam
    n = cfg.get_int("geometry", "elements_per_side")
    sep = cfg.get_float("geometry", "separation_wavelengths") * lam
    tx = channels.square_aperture(side, n)
    rx = channels.square_aperture(side, n, center=(0.0, 0.0, sep))
    h = channels.los_dyadic_channel(tx, rx, carrier)
    series = {}
    for rp in channels.POLARIZATIONS:
        for tp in channels.POLARIZATIONS:
            block = h.block(rp, tp)
            series[f"sv_{rp}{tp}"] = np.linalg.svd(block, compute_uv=False)
    idx = np.arange(1, n * n + 1)
    csv_path = cfg.out_dir / f"{cfg.name}.csv"
    svg_path = cfg.out_dir / f"{cfg.name}.svg"
    reporting.write_xy_csv(csv_path, "mode_index", idx, series)
    reporting.save_line_plot(svg_path, idx,
                             {k.removeprefix("sv_").upper(): v for k, v in series.items()},
                             xlabel="singular value index", ylabel="singular value",
                             logy=True)
    return {"csv": csv_path, "svg": svg_path, "series": series}


def run_precoders(cfg: ExperimentConfig) -> dict:
    carrier = cfg.carrier
    lam = carrier.wavelength_m
    tx = channels.square_aperture(cfg.get_float("geometry", "tx_side_wavelengths") * lam,
                                  cfg.get_int("geometry", "tx_per_side"))
    n_rx = cfg.get_int("geometry", "rx_per_side")
    rx = channels.square_aperture(
        n_rx * cfg.get_float("geometry", "rx_spacing_wavelengths") * lam, n_rx,
        center=(0.0, 0.0, cfg.get_float("geometry", "separation_wavelengths") * lam))
    spectrum = channels.isotropic_spectrum(
        carrier, cfg.get_float("spectrum", "side_wavelengths") * lam)
    trials = cfg.get_int("monte_carlo", "n_realizations")
    snr_db = np.asarray(cfg.get_floats("sweep", "snr_db"))
    acc = {kind: np.zeros(snr_db.size) for kind in ("mmse", "zf", "mrt")}
    for t in range(trials):
        trial_seed = int(np.random.default_rng([cfg.seed, t]).integers(0, 2**63 - 1))
        h = channels.fourier_planewave_channel(tx, rx, spectrum.with_seed(trial_seed))
        arr = h.entries
        arr = arr * np.sqrt(arr.size) / np.linalg.norm(arr)
        for i, s in enumerate(snr_db):
            snr = 10 ** (s / 10)
            for kind in acc:
                acc[kind][i] += infomeasure.precoder_spectral_efficiency(arr, kind, snr)
    series = {f"se_{kind}": acc[kind] / trials for kind in ("mmse", "zf", "mrt")}
    csv_path = cfg.out_dir / f"{cfg.name}.csv"
    svg_path = cfg.out_dir / f"{cfg.name}.svg"
    reporting.write_xy_csv(csv_path, "snr_db", snr_db, series)
    reporting.save_line_plot(svg_path, snr_db,
                             {k.removeprefix("se_").upper(): v for k, v in series.items()},
                             xlabel="SNR (dB)", ylabel="spectral efficiency (bits/s/Hz)")
    return {"csv": csv_path, "svg": svg_path, "series": series}


def run_capacity_bound(cfg: ExperimentConfig) -> dict:
    carrier = cfg.carrier
    lam = carrier.wavelength_m
    spacing = cfg.get_float("geometry", "spacing_wavelengths") * lam
    n_tx = cfg.get_int("geometry", "tx_per_side")
    n_rx = cfg.get_int("geometry", "rx_per_side")
    distances = cfg.get_floats("geometry", "distances_wavelengths")
    snr_db = np.asarray(cfg.get_floats("sweep", "snr_db"))
    tx = channels.square_aperture(n_tx * spacing, n_tx)
    rows = []
    plot_series = {}
    for r_wl in distances:
        rx = channels.square_aperture(n_rx * spacing, n_rx, center=(0.0, 0.0, r_wl * lam))
        h = channels.los_dyadic_channel(tx, rx, carrier)
        spec = infomeasure.singular_spectrum(h, keep_factors=False)
        streams = spec.singular_values.size
        caps, bounds, bounds_ff = [], [], []
        for s in snr_db:
            snr = 10 ** (s / 10)
            caps.append(infomeasure.capacity_uniform(spec, snr, rho=1.0,
                                                     streams=streams).bits_per_s_per_hz)
            bounds.append(infomeasure.capacity_upper_bound(tx, rx, carrier, snr, streams))
            bounds_ff.append(infomeasure.capacity_upper_bound(tx, rx, carrier, snr, streams,
                                                              far_field=True))
        for s, c, b, bf in zip(snr_db, caps, bounds, bounds_ff):
            rows.append((float(s), float(r_wl), c, b, bf))
        plot_series[f"capacity r={r_wl:g}"] = caps
        plot_series[f"bound r={r_wl:g}"] = bounds
    csv_path = cfg.out_dir / f"{cfg.name}.csv"
    svg_path = cfg.out_dir / f"{cfg.name}.svg"
    reporting.write_csv(csv_path,
                        ["snr_db", "distance_wavelengths", "capacity",
                         "upper_bound", "upper_bound_far_field"], rows)
    reporting.save_line_plot(svg_path, snr_db, plot_series,
                             xlabel="transmit SNR (dB)", ylabel="bits/s/Hz")
    return {"csv": csv_path, "svg": svg_path, "rows": rows}


def run_packing(cfg: ExperimentConfig) -> dict:
    link = packing.LineLinkConfig(
        energy_radius=cfg.get_float("line_link", "energy_radius"),
        epsilon=cfg.get_float("line_link", "epsilon"),
        source_length=cfg.get_float("line_link", "source_length"),
        observation_length=cfg.get_float("line_link", "observation_length"),
        separation=cfg.get_float("line_link", "separation"),
        source_points=cfg.get_int("line_link", "source_points"),
        observation_points=cfg.get_int("line_link", "observation_points"))
    constraint = packing.PatternConstraint(
        angular_window_rad=(np.deg2rad(cfg.get_float("pattern", "window_low_deg")),
                            np.deg2rad(cfg.get_float("pattern", "window_high_deg"))),
        leakage_threshold=cfg.get_float("pattern", "leakage_threshold"),
        grid_step_deg=cfg.get_float("pattern", "grid_step_deg"))
    dim = cfg.get_int("packing", "dim")

    unconstrained = packing.epsilon_capacity(link, cfg.carrier, dim=dim)
    constrained = packing.epsilon_capacity(link, cfg.carrier, constraint=constraint, dim=dim)
    op = packing.build_line_operator(link, cfg.carrier)
    report = packing.pattern_mode_report(op, link, constraint, cfg.carrier)

    csv_path = cfg.out_dir / f"{cfg.name}.csv"
    svg_path = cfg.out_dir / f"{cfg.name}.svg"
    summary_path = cfg.out_dir / f"{cfg.name}_summary.txt"
    reporting.write_csv(csv_path, ["mode_index", "semiaxis", "kept", "peak_leakage"],
                        [(m.index, m.semiaxis, m.kept, m.peak_leakage) for m in report])
    semiaxes = packing.ellipsoid_semiaxes(op, link.energy_radius)
    reporting.save_line_plot(svg_path, np.arange(1, semiaxes.size + 1),
                             {"semi-axis": semiaxes,
                              "ball radius": np.full(semiaxes.size, link.epsilon)},
                             xlabel="mode index", ylabel="ellipsoid semi-axis", logy=True)
    summary = {
        "ball_count_unconstrained": unconstrained.ball_count,
        "capacity_bits_unconstrained": unconstrained.capacity_bits,
        "ball_count_constrained": constrained.ball_count,
        "capacity_bits_constrained": constrained.capacity_bits,
        "modes_removed_by_constraint": constrained.removed_by_constraint,
    }
    reporting.write_summary(summary_path, summary)
    return {"csv": csv_path, "svg": svg_path, "summary_path": summary_path, **summary}


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    description: str
    targets: tuple
    runner: Callable[[ExperimentConfig], dict]


_SPECS = [
    ExperimentSpec(
        "autocorr_dyadic",
        "LoS dyadic-model spatial autocorrelation versus the closed-form isotropic kernel",
        ("dyadic-model-autocorrelation",), run_autocorr_dyadic),
    ExperimentSpec(
        "autocorr_fourier",
        "plane-wave-model spatial autocorrelation versus the closed-form isotropic kernel",
        ("plane-wave-model-autocorrelation",), run_autocorr_fourier),
    ExperimentSpec(
        "capacity_bound",
        "LoS capacity with its closed-form upper bound and far-field reduction",
        ("los-capacity-upper-bound",), run_capacity_bound),
    ExperimentSpec(
        "capacity_spacing",
        "rich-scattering capacity versus SNR for several receiver spacings",
        ("nlos-capacity-by-spacing",), run_capacity_spacing),
    ExperimentSpec(
        "dof_saturation",
        "effective DOF versus element count in a fixed surface at several distances",
        ("dof-versus-element-count",), run_dof_saturation),
    ExperimentSpec(
        "eigen_spacing",
        "rich-scattering channel eigenvalue profiles for several receiver spacings",
        ("nlos-eigenvalues-by-spacing",), run_eigen_spacing),
    ExperimentSpec(
        "limits",
        "maximum directivity gain and minimum quality factor versus electrical size",
        ("directivity-gain-limits", "quality-factor-limits"), run_limits),
    ExperimentSpec(
        "packing",
        "deterministic epsilon-ball capacity of a line link, with and without a pattern constraint",
        ("epsilon-ball-packing",), run_packing),
    ExperimentSpec(
        "polarization_spectrum",
        "per-polarization singular values of a near-field LoS channel",
        ("near-field-polarization-spectra",), run_polarization_spectrum),
    ExperimentSpec(
        "precoders",
        "spectral efficiency of MMSE, ZF, and MRT precoding on rich-scattering channels",
        ("linear-precoder-spectral-efficiency",), run_precoders),
]

REGISTRY = {spec.name: spec for spec in _SPECS}


def list_experiments():
    """(name, description) pairs in stable alphabetical order."""
    return [(spec.name, spec.description) for spec in sorted(_SPECS, key=lambda s: s.name)]


def figure_targets():
    out = []
    for spec in _SPECS:
        out.extend(spec.targets)
    return tuple(out)


def run_experiment(cfg: ExperimentConfig) -> dict:
    if cfg.name not in REGISTRY:
        raise KeyError(cfg.name)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    try:
        return REGISTRY[cfg.name].runner(cfg)
    except NumericalError as exc:
        raise NumericalError(f"experiment {cfg.name!r}: {exc}") from exc
