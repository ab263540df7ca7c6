"""Figure builders: one function per figure kind, plus the render entry.

Each builder takes the parsed datasets and returns a matplotlib Figure;
``render`` wires a FigureJob through schema checks, the right builder,
and a deterministic save (fixed style, no date metadata).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import Dataset, SchemaError, load

#: cut values highlighted in the spectra panels, with their colors
SPECTRA_CUTS = [(0.25, "red"), (0.0, "blue"), (-0.25, "green")]

_STYLE = {
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
}


@dataclass(frozen=True)
class FigureJob:
    kind: str
    inputs: tuple
    output: Path


def build_fig1(datasets: list[Dataset]):
    """Three-curve plot of the frequencies versus normalized amplitude."""
    ds = datasets[0]
    c = ds.columns
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.plot(c["amp_over_omega"], c["rabi_rwa_mhz"], color="tab:blue",
            label="RWA Rabi frequency")
    ax.plot(c["amp_over_omega"], c["bs_shift_mhz"], color="tab:orange",
            label="Bloch-Siegert shift")
    ax.plot(c["amp_over_omega"], c["rabi_eff_mhz"], color="tab:green",
            label="effective Rabi frequency")
    ax.set_xlabel(r"$A/\omega$")
    ax.set_ylabel(r"$\nu/2\pi$ (MHz)")
    ax.legend(loc="best")
    fig.tight_layout()
    return fig


def build_fig2(datasets: list[Dataset]):
    """Grid of population traces: rows = amplitude offsets (descending),
    columns = drive phases; the zero-offset row drawn in red."""
    panels = {}
    for ds in datasets:
        key = (ds.meta_float("delta_a_over_omega"), ds.meta_float("psi_deg"))
        panels[key] = ds
    offsets = sorted({k[0] for k in panels}, reverse=True)
    phases = sorted({k[1] for k in panels})
    fig, axes = plt.subplots(len(offsets), len(phases),
                             figsize=(3.6 * len(phases), 1.6 * len(offsets)),
                             sharex=True, sharey=True, squeeze=False)
    for i, da in enumerate(offsets):
        for j, psi in enumerate(phases):
            ax = axes[i][j]
            ds = panels.get((da, psi))
            if ds is None:
                raise SchemaError(f"no trace file for offset {da}, "
                                  f"phase {psi}")
            color = "red" if da == 0.0 else "black"
            ax.plot(ds.columns["t_us"], ds.columns["p_analytic"],
                    color=color, lw=0.5)
            if i == 0:
                ax.set_title(rf"$\psi = {psi:g}^\circ$")
            if j == 0:
                ax.set_ylabel(rf"$\Delta A/\omega$ = {da:+g}" + "\nP")
            if i == len(offsets) - 1:
                ax.set_xlabel(r"$t$ ($\mu$s)")
    fig.tight_layout()
    return fig


def _spectra_panels(datasets, sweep_col, panel_key, cut_values):
    fig, axes = plt.subplots(2, len(datasets),
                             figsize=(5.2 * len(datasets), 6.0),
                             squeeze=False)
    for j, ds in enumerate(datasets):
        sweep = ds.columns[sweep_col]
        freq = ds.columns["freq_mhz"]
        mag = ds.columns["abs_f"]
        values = np.unique(sweep)
        freqs = np.unique(freq)
        grid = np.full((len(values), len(freqs)), np.nan)
        for i, v in enumerate(values):
            mask = sweep == v
            order = np.argsort(freq[mask])
            grid[i] = mag[mask][order]
        ax_map = axes[0][j]
        mesh = ax_map.pcolormesh(freqs, values, grid, cmap="viridis",
                                 shading="nearest")
        fig.colorbar(mesh, ax=ax_map, label="|F|")
        ax_map.set_xlabel(r"$\omega_*/2\pi$ (MHz)")
        ax_map.set_ylabel(sweep_col)
        ax_map.set_title(f"{panel_key} = {ds.meta[panel_key]}")
        ax_map.grid(False)

        ax_cut = axes[1][j]
        for value, color in cut_values:
            matches = values[np.isclose(values, value, atol=1e-9)]
            if len(matches) == 0:
                continue
            i = int(np.nonzero(np.isclose(values, matches[0]))[0][0])
            ax_cut.plot(freqs, grid[i], color=color, lw=0.8,
                        label=f"{sweep_col} = {value:g}")
        ax_cut.set_xlabel(r"$\omega_*/2\pi$ (MHz)")
        ax_cut.set_ylabel("|F|")
        ax_cut.legend(loc="best")
    fig.tight_layout()
    return fig


def build_fig3(datasets: list[Dataset]):
    """Per drive phase: response map over amplitude offsets plus cuts."""
    return _spectra_panels(datasets, "delta_a_over_omega", "psi_deg",
                           SPECTRA_CUTS)


def build_fig4(datasets: list[Dataset]):
    """Per amplitude offset: response map over drive phases plus cuts."""
    cuts = [(0.0, "red"), (45.0, "blue"), (90.0, "green")]
    return _spectra_panels(datasets, "psi_deg", "delta_a_over_omega", cuts)


BUILDERS = {
    "fig1": build_fig1,
    "fig2": build_fig2,
    "fig3": build_fig3,
    "fig4": build_fig4,
}


def render(job: FigureJob) -> Path:
    """Validate inputs, build the figure, write the image.

    Nothing is written when the schema check fails.  Saving strips date
    metadata so reruns produce identical bytes.
    """
    datasets = load(job.kind, job.inputs)
    with plt.rc_context(_STYLE):
        fig = BUILDERS[job.kind](datasets)
    out = Path(job.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if out.suffix in (".svg", ".pdf", ".eps") else {}
    try:
        fig.savefig(out, metadata=metadata)
    finally:
        plt.close(fig)
    return out
