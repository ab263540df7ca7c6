"""Command line entry point.

Subcommands fig1..fig4 write the figure datasets; validate runs the
acceptance suite and (by default) also emits the golden datasets.  Exit
codes: 0 success, 1 validation failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .oracle import IntegrationError
from .scenarios import (ConfigError, ScenarioSpec, load_config,
                        run_freq_sweep, run_spectra_vs_amp,
                        run_spectra_vs_phase, run_time_traces, run_validate)

_SUBCOMMAND_KIND = {
    "fig1": "freq_sweep",
    "fig2": "time_traces",
    "fig3": "spectra_vs_amp",
    "fig4": "spectra_vs_phase",
    "validate": "validate",
}

_SUBCOMMAND_HELP = {
    "fig1": "frequencies and shift vs normalized drive amplitude",
    "fig2": "population traces around the first crossing",
    "fig3": "Fourier-response maps vs amplitude offset",
    "fig4": "Fourier-response maps vs drive phase",
    "validate": "run the acceptance suite and emit a report",
}

_RUNNERS = {
    "fig1": run_freq_sweep,
    "fig2": run_time_traces,
    "fig3": run_spectra_vs_amp,
    "fig4": run_spectra_vs_phase,
}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=Path, default=None,
                     help="JSON config file (flat key-value)")
    sub.add_argument("--out-dir", type=Path, default=Path("out"),
                     help="output directory (default: ./out)")
    sub.add_argument("--delta-a-over-omega", type=float, default=None,
                     dest="delta_a_over_omega",
                     help="amplitude offset from the first crossing, in "
                          "units of the modulation frequency")
    sub.add_argument("--psi-deg", type=float, default=None, dest="psi_deg",
                     help="drive phase in degrees")
    sub.add_argument("--gamma", type=float, default=None,
                     dest="gamma_inv_us", help="spectral decay rate, 1/us")
    sub.add_argument("--n-max", type=int, default=None, dest="n_max",
                     help="truncation order of the Bessel sums")
    sub.add_argument("--dt-ns", type=float, default=None, dest="dt_ns",
                     help="time-trace sampling step, ns")
    sub.add_argument("--window-us", type=float, default=None,
                     dest="window_us", help="time-trace window, us")
    sub.add_argument("--workers", type=int, default=None,
                     help="worker threads for sweep points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramanrabi",
        description="Coherent dynamics of second-order Raman transitions: "
                    "figure datasets and validation suite.")
    subs = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMAND_KIND:
        sub = subs.add_parser(name, help=_SUBCOMMAND_HELP[name])
        _add_common(sub)
        if name == "validate":
            sub.add_argument("--criteria", type=str, default=None,
                             help="comma-separated subset, e.g. A1,A3,A10")
            sub.add_argument("--no-golden", action="store_true",
                             help="skip emitting the figure datasets")
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    keys = ("delta_a_over_omega", "psi_deg", "gamma_inv_us", "n_max",
            "dt_ns", "window_us", "workers")
    return {k: getattr(args, k) for k in keys}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
        spec = ScenarioSpec(_SUBCOMMAND_KIND[args.command], cfg, args.out_dir)
        if args.command == "validate":
            criteria = (None if args.criteria is None
                        else [c.strip().upper()
                              for c in args.criteria.split(",") if c.strip()])
            try:
                report, paths = run_validate(spec, criteria=criteria,
                                             emit_golden=not args.no_golden)
            except ValueError as err:       # unknown criterion name
                raise ConfigError(str(err)) from err
            for entry in report["criteria"]:
                status = "PASS" if entry["passed"] else "FAIL"
                print(f"[{status}] {entry['criterion']}: "
                      f"{entry['description']} ({entry['seconds']:.1f}s)")
                if not entry["passed"]:
                    for line in entry["details"]:
                        print(f"         {line}")
            print(f"report: {paths[0]}")
            return 0 if report["all_passed"] else 1
        paths = _RUNNERS[args.command](spec)
        for path in paths:
            print(path)
        return 0
    except (ConfigError, IntegrationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
