"""Reader and schema checks for the '#'-metadata CSV files.

The upstream tool writes plain CSV with a '#'-prefixed header block of
``key = value`` pairs, then a column-name row, then numeric rows.  This
module parses that format and enforces the column schema each figure
kind expects, so a wrong or empty input fails loudly before any drawing
happens.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """Input file does not match the expected figure-data schema."""


#: required columns per figure kind
SCHEMAS = {
    "fig1": {"amp_over_omega", "rabi_rwa_mhz", "bs_shift_mhz",
             "rabi_eff_mhz"},
    "fig2": {"t_us", "p_analytic", "p_ode"},
    "fig3": {"delta_a_over_omega", "freq_mhz", "abs_f"},
    "fig4": {"psi_deg", "freq_mhz", "abs_f"},
}


@dataclass(frozen=True)
class Dataset:
    path: Path
    meta: dict
    columns: dict

    def meta_float(self, key: str, default: float | None = None) -> float:
        if key not in self.meta:
            if default is None:
                raise SchemaError(f"{self.path}: missing metadata key {key!r}")
            return default
        return float(self.meta[key])


def read_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise SchemaError(f"cannot read {path}: {err}") from err
    meta, names, rows = {}, None, []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        if names is None:
            names = [n.strip() for n in line.split(",")]
            continue
        parts = line.split(",")
        if len(parts) != len(names):
            raise SchemaError(f"{path}:{lineno}: expected {len(names)} "
                              f"columns, got {len(parts)}")
        try:
            rows.append([float(x) for x in parts])
        except ValueError as err:
            raise SchemaError(f"{path}:{lineno}: non-numeric cell "
                              f"({err})") from err
    if names is None or not rows:
        raise SchemaError(f"{path}: no data rows")
    data = np.asarray(rows)
    columns = {name: data[:, i] for i, name in enumerate(names)}
    return Dataset(path=path, meta=meta, columns=columns)


def check_schema(ds: Dataset, kind: str) -> Dataset:
    required = SCHEMAS[kind]
    missing = sorted(required - set(ds.columns))
    if missing:
        raise SchemaError(f"{ds.path}: missing columns for {kind}: "
                          f"{', '.join(missing)}")
    return ds


def load(kind: str, paths) -> list[Dataset]:
    if kind not in SCHEMAS:
        raise SchemaError(f"unknown figure kind {kind!r}")
    if not paths:
        raise SchemaError("no input files given")
    return [check_schema(read_dataset(p), kind) for p in paths]
