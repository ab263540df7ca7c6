"""Config-driven reproduction of the reference figure datasets.

Five scenario kinds: ``freq_sweep`` (frequencies vs normalized drive
amplitude), ``time_traces`` (closed form and integrated dynamics around
the first crossing), ``spectra_vs_amp`` and ``spectra_vs_phase``
(Fourier-response maps with detected-line summaries), and ``validate``
(the acceptance suite with a machine-readable report).

Every output file is CSV with a '#'-prefixed metadata header carrying
the full parameter snapshot and the code version; identical configs
produce byte-identical files (fixed grids, fixed-step integration, no
timestamps, no randomness).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, demod
from .analytic import (TimeGrid, envelope_coefficients,
                       population_closed_form, raman_quantities)
from .bessel import zero_crossing_amplitude
from .oracle import evolve_full
from .params import (RESONANCE_WARN_RATIO, TWO_PI, DriveParams, derive_frame,
                     resonance_detuning)
from .spectrum import default_freq_grid, find_lines, fourier_response
from .validation import run_criteria

SCENARIO_KINDS = ("freq_sweep", "time_traces", "spectra_vs_amp",
                  "spectra_vs_phase", "validate")

#: reference drive and qubit parameters; every key can be overridden by
#: config file or CLI flag, unknown keys are rejected
DEFAULTS = {
    "delta_x_mhz": 10.0,
    "delta_z_mhz": 3.0,
    "omega_mhz": 5.22,
    "psi_deg": 0.0,
    "gamma_inv_us": 0.25,
    "amp_over_omega": None,        # direct amplitude, exclusive with below
    "delta_a_over_omega": None,    # amplitude as first crossing + offset
    "n_max": 40,
    "dt_ns": 0.1,                  # time-trace sampling
    "window_us": 2.0,              # time-trace window
    "spectrum_dt_ns": 1.0,
    "spectrum_window_us": 40.0,
    "freq_max_mhz": 25.0,
    "freq_step_mhz": 0.01,
    "min_prominence": 0.02,
    "amp_sweep_min": 0.0,          # freq_sweep range of amp/omega
    "amp_sweep_max": 5.0,
    "amp_sweep_step": 0.01,
    "trace_offsets": [0.25, 0.1, 0.0, -0.1, -0.25],
    "trace_phases_deg": [0.0, 90.0],
    "spectra_amp_offsets": [-0.25, -0.2, -0.15, -0.1, -0.05, 0.0,
                            0.05, 0.1, 0.15, 0.2, 0.25],
    "spectra_amp_phases_deg": [0.0, 90.0],
    "spectra_phase_values_deg": [0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0],
    "spectra_phase_offsets": [0.0, -0.25],
    "workers": 1,
}

_INT_KEYS = {"n_max", "workers"}
_LIST_KEYS = {"trace_offsets", "trace_phases_deg", "spectra_amp_offsets",
              "spectra_amp_phases_deg", "spectra_phase_values_deg",
              "spectra_phase_offsets"}
_OPTIONAL_KEYS = {"amp_over_omega", "delta_a_over_omega"}


class ConfigError(ValueError):
    """Bad scenario configuration (unknown key, type, or contradiction)."""


def load_config(path: str | Path | None = None,
                overrides: dict | None = None) -> dict:
    """Merge defaults, an optional JSON config file, and CLI overrides.

    Unknown keys are errors: a typo in a physics parameter must not
    silently fall back to a default.
    """
    cfg = dict(DEFAULTS)
    layers = []
    if path is not None:
        path = Path(path)
        try:
            layers.append(json.loads(path.read_text()))
        except OSError as err:
            raise ConfigError(f"cannot read config {path}: {err}") from err
        except json.JSONDecodeError as err:
            raise ConfigError(f"config {path} is not valid JSON: {err}") from err
        if not isinstance(layers[-1], dict):
            raise ConfigError(f"config {path} must hold a JSON object")
    if overrides:
        layers.append({k: v for k, v in overrides.items() if v is not None})
    for layer in layers:
        unknown = sorted(set(layer) - set(DEFAULTS))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        cfg.update(layer)
    _validate_config(cfg)
    return cfg


def _validate_config(cfg: dict) -> None:
    for key, value in cfg.items():
        if key in _OPTIONAL_KEYS and value is None:
            continue
        if key in _LIST_KEYS:
            if (not isinstance(value, (list, tuple)) or not value
                    or not all(isinstance(v, (int, float)) for v in value)):
                raise ConfigError(f"{key} must be a non-empty number list")
            cfg[key] = [float(v) for v in value]
        elif key in _INT_KEYS:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"{key} must be an integer, got {value!r}")
        elif not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"{key} must be a number, got {value!r}")
    if (cfg["amp_over_omega"] is not None
            and cfg["delta_a_over_omega"] is not None):
        raise ConfigError("amp_over_omega and delta_a_over_omega are "
                          "mutually exclusive")
    for key in ("omega_mhz", "dt_ns", "window_us", "spectrum_dt_ns",
                "spectrum_window_us", "freq_step_mhz", "amp_sweep_step"):
        if cfg[key] <= 0:
            raise ConfigError(f"{key} must be positive")
    if cfg["workers"] < 1:
        raise ConfigError("workers must be >= 1")
    if cfg["n_max"] < 4:
        raise ConfigError("n_max must be >= 4")


@dataclass(frozen=True)
class ScenarioSpec:
    """A scenario kind bound to a validated config and an output directory."""

    kind: str
    config: dict
    out_dir: Path

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ConfigError(f"unknown scenario kind {self.kind!r}")
        object.__setattr__(self, "out_dir", Path(self.out_dir))


def base_params(cfg: dict, psi_deg: float | None = None,
                delta_a: float | None = None) -> DriveParams:
    """DriveParams from a config, resolving the amplitude convention.

    Amplitude precedence: explicit delta_a argument, then the config's
    delta_a_over_omega (amp = first crossing + offset), then
    amp_over_omega, then the crossing itself.
    """
    psi = cfg["psi_deg"] if psi_deg is None else psi_deg
    p0 = DriveParams.from_mhz(cfg["delta_x_mhz"], cfg["delta_z_mhz"],
                              amp_mhz=0.0, omega_mhz=cfg["omega_mhz"],
                              psi_deg=psi, gamma_inv_us=cfg["gamma_inv_us"])
    if delta_a is None and cfg["delta_a_over_omega"] is not None:
        delta_a = cfg["delta_a_over_omega"]
    if delta_a is None and cfg["amp_over_omega"] is not None:
        return p0.replace(amp=cfg["amp_over_omega"] * p0.mod_freq)
    f0 = derive_frame(p0)
    crossing = zero_crossing_amplitude(f0, p0.mod_freq, k=1)
    return p0.replace(amp=crossing + (delta_a or 0.0) * p0.mod_freq)


# ------------------------------------------------------------- CSV output

def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path: Path, meta: dict, columns: dict[str, np.ndarray]) -> Path:
    """CSV with '#'-prefixed metadata, deterministic formatting."""
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    length = len(arrays[0])
    if any(len(a) != length for a in arrays):
        raise ValueError("column length mismatch")
    lines = [f"# ramanrabi {__version__}"]
    for key, value in meta.items():
        lines.append(f"# {key} = {_fmt(value)}")
    lines.append(",".join(names))
    for i in range(length):
        lines.append(",".join(_fmt(float(a[i])) for a in arrays))
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n")
    except OSError as err:
        raise ConfigError(f"cannot write {path}: {err}") from err
    return path


def _param_meta(p: DriveParams, cfg: dict) -> dict:
    f = derive_frame(p)
    meta = {
        "delta_x_mhz": p.delta_x_mhz, "delta_z_mhz": p.delta_z_mhz,
        "omega_mhz": p.mod_freq_mhz, "psi_deg": p.phase_deg,
        "gamma_inv_us": p.gamma, "amp_over_omega": p.amp_over_omega,
        "omega0_mhz": f.omega0_mhz, "mod_index": f.mod_index,
        "coupling_ratio": f.coupling_ratio, "n_max": cfg["n_max"],
    }
    ratio = resonance_detuning(f, p)
    meta["resonance_detuning"] = ratio
    if abs(ratio) > RESONANCE_WARN_RATIO:
        meta["resonance_warning"] = (
            f"|detuning ratio| {abs(ratio):.3g} above {RESONANCE_WARN_RATIO}")
    return meta


# ------------------------------------------------------------- scenarios

def run_freq_sweep(spec: ScenarioSpec) -> list[Path]:
    """Frequencies and shift versus normalized drive amplitude."""
    cfg = spec.config
    p0 = base_params(cfg, delta_a=0.0)
    ratios = np.arange(cfg["amp_sweep_min"],
                       cfg["amp_sweep_max"] + 0.5 * cfg["amp_sweep_step"],
                       cfg["amp_sweep_step"])
    rows = {"amp_over_omega": [], "mod_index": [], "rabi_rwa_mhz": [],
            "bs_shift_mhz": [], "rabi_eff_mhz": [], "coupling_ratio": []}
    for r in ratios:
        p = p0.replace(amp=float(r) * p0.mod_freq)
        f = derive_frame(p)
        q = raman_quantities(p, f, n_max=cfg["n_max"])
        rows["amp_over_omega"].append(r)
        rows["mod_index"].append(f.mod_index)
        rows["rabi_rwa_mhz"].append(q.omega_rwa / TWO_PI)
        rows["bs_shift_mhz"].append(q.bs_shift / TWO_PI)
        rows["rabi_eff_mhz"].append(q.omega_eff / TWO_PI)
        rows["coupling_ratio"].append(f.coupling_ratio)
    meta = _param_meta(p0, cfg)
    meta["kind"] = "freq_sweep"
    del meta["amp_over_omega"], meta["mod_index"], meta["coupling_ratio"]
    path = write_csv(spec.out_dir / "fig1_freq_sweep.csv", meta,
                     {k: np.array(v) for k, v in rows.items()})
    return [path]


def _trace_label(delta_a: float, psi_deg: float) -> str:
    return f"dA_{delta_a:+.2f}_psi_{psi_deg:g}"


def run_time_traces(spec: ScenarioSpec) -> list[Path]:
    """Closed-form and integrated traces around the first crossing."""
    cfg = spec.config
    grid = TimeGrid.from_span(0.0, cfg["window_us"], cfg["dt_ns"] * 1e-3)
    paths = []
    summary = {"delta_a_over_omega": [], "psi_deg": [],
               "rabi_eff_mhz": [], "envelope_freq_analytic_mhz": [],
               "envelope_freq_ode_mhz": [], "modulation_depth": []}
    for delta_a in cfg["trace_offsets"]:
        for psi_deg in cfg["trace_phases_deg"]:
            p = base_params(cfg, psi_deg=psi_deg, delta_a=delta_a)
            f = derive_frame(p)
            q = raman_quantities(p, f, n_max=cfg["n_max"])
            ec = envelope_coefficients(p, f, q)
            closed = population_closed_form(p, f, q, ec, grid)
            ode = evolve_full(p, grid)
            meta = _param_meta(p, cfg)
            meta["kind"] = "time_traces"
            meta["delta_a_over_omega"] = delta_a
            path = write_csv(
                spec.out_dir / f"fig2_{_trace_label(delta_a, psi_deg)}.csv",
                meta, {"t_us": closed.times, "p_analytic": closed.samples,
                       "p_ode": ode.samples})
            paths.append(path)
            summary["delta_a_over_omega"].append(delta_a)
            summary["psi_deg"].append(psi_deg)
            summary["rabi_eff_mhz"].append(q.omega_eff / TWO_PI)
            summary["envelope_freq_analytic_mhz"].append(
                demod.slow_frequency(closed) / TWO_PI)
            summary["envelope_freq_ode_mhz"].append(
                demod.slow_frequency(ode) / TWO_PI)
            summary["modulation_depth"].append(
                demod.modulation_depth(q, ec, grid))
    meta = _param_meta(base_params(cfg, delta_a=0.0), cfg)
    meta["kind"] = "time_traces_summary"
    paths.append(write_csv(spec.out_dir / "fig2_summary.csv", meta,
                           {k: np.array(v) for k, v in summary.items()}))
    return paths


def _one_spectrum(cfg: dict, delta_a: float, psi_deg: float):
    p = base_params(cfg, psi_deg=psi_deg, delta_a=delta_a)
    f = derive_frame(p)
    q = raman_quantities(p, f, n_max=cfg["n_max"])
    ec = envelope_coefficients(p, f, q)
    grid = TimeGrid.from_span(0.0, cfg["spectrum_window_us"],
                              cfg["spectrum_dt_ns"] * 1e-3)
    trace = population_closed_form(p, f, q, ec, grid)
    fr = fourier_response(trace, cfg["gamma_inv_us"],
                          default_freq_grid(cfg["freq_max_mhz"],
                                            cfg["freq_step_mhz"]))
    lines = find_lines(fr, cfg["min_prominence"])
    return fr, lines


def _run_spectra(spec: ScenarioSpec, sweep_pairs, sweep_name, panel_name,
                 file_stem) -> list[Path]:
    """Shared machinery for the two spectra scenarios.

    sweep_pairs: list of (panel_value, [sweep values]); each panel gets a
    long-format magnitude file plus a detected-lines file.
    """
    cfg = spec.config
    paths = []
    for panel_value, sweep_values in sweep_pairs:
        if sweep_name == "delta_a_over_omega":
            tasks = [(v, panel_value) for v in sweep_values]
        else:
            tasks = [(panel_value, v) for v in sweep_values]
        workers = min(cfg["workers"], len(tasks))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(
                    lambda t: _one_spectrum(cfg, t[0], t[1]), tasks))
        else:
            results = [_one_spectrum(cfg, da, psi) for da, psi in tasks]

        sweep_col, freq_col, mag_col = [], [], []
        line_cols = {sweep_name: [], "center_mhz": [], "amplitude": [],
                     "fwhm_mhz": []}
        for value, (fr, lines) in zip(sweep_values, results):
            sweep_col.append(np.full(len(fr.freq_grid), value))
            freq_col.append(fr.freq_grid / TWO_PI)
            mag_col.append(fr.magnitude)
            for s in lines:
                line_cols[sweep_name].append(value)
                line_cols["center_mhz"].append(s.center / TWO_PI)
                line_cols["amplitude"].append(s.amplitude)
                line_cols["fwhm_mhz"].append(s.fwhm / TWO_PI)
        meta = _param_meta(base_params(cfg, delta_a=0.0), cfg)
        meta["kind"] = spec.kind
        meta[panel_name] = panel_value
        stem = f"{file_stem}_{panel_name}_{panel_value:g}"
        paths.append(write_csv(
            spec.out_dir / f"{stem}.csv", meta,
            {sweep_name: np.concatenate(sweep_col),
             "freq_mhz": np.concatenate(freq_col),
             "abs_f": np.concatenate(mag_col)}))
        paths.append(write_csv(
            spec.out_dir / f"{stem}_lines.csv", meta,
            {k: np.array(v) for k, v in line_cols.items()}))
    return paths


def run_spectra_vs_amp(spec: ScenarioSpec) -> list[Path]:
    """Fourier maps versus amplitude offset, one panel per drive phase."""
    cfg = spec.config
    pairs = [(psi, cfg["spectra_amp_offsets"])
             for psi in cfg["spectra_amp_phases_deg"]]
    return _run_spectra(spec, pairs, "delta_a_over_omega", "psi_deg", "fig3")


def run_spectra_vs_phase(spec: ScenarioSpec) -> list[Path]:
    """Fourier maps versus drive phase, one panel per amplitude offset."""
    cfg = spec.config
    pairs = [(da, cfg["spectra_phase_values_deg"])
             for da in cfg["spectra_phase_offsets"]]
    return _run_spectra(spec, pairs, "psi_deg", "delta_a_over_omega", "fig4")


def run_validate(spec: ScenarioSpec, criteria=None,
                 emit_golden: bool = True) -> tuple[dict, list[Path]]:
    """Run the acceptance criteria; optionally emit the figure datasets.

    Returns (report, written paths).  The report carries one entry per
    criterion; the caller decides the exit code.
    """
    cfg = spec.config
    results = run_criteria(cfg, criteria)
    report = {
        "version": __version__,
        "config": {k: (list(v) if isinstance(v, (list, tuple)) else v)
                   for k, v in cfg.items()},
        "criteria": [r.as_dict() for r in results],
        "all_passed": all(r.passed for r in results),
    }
    paths = []
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    report_path = spec.out_dir / "validation_report.json"
    report_path.write_text(json.dumps(report, indent=2) + "\n")
    paths.append(report_path)
    if emit_golden:
        paths += run_freq_sweep(ScenarioSpec("freq_sweep", cfg, spec.out_dir))
        paths += run_time_traces(ScenarioSpec("time_traces", cfg,
                                              spec.out_dir))
        paths += run_spectra_vs_amp(ScenarioSpec("spectra_vs_amp", cfg,
                                                 spec.out_dir))
        paths += run_spectra_vs_phase(ScenarioSpec("spectra_vs_phase", cfg,
                                                   spec.out_dir))
    return report, paths


RUNNERS = {
    "freq_sweep": run_freq_sweep,
    "time_traces": run_time_traces,
    "spectra_vs_amp": run_spectra_vs_amp,
    "spectra_vs_phase": run_spectra_vs_phase,
}
