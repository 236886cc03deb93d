"""Surface files: deterministic CSV plus a JSON metadata sidecar.

CSV schema (stable across pipelines; absent variants are empty fields,
never omitted columns)::

    j,ell,t,C_raw,C_tmem,C_zne,C_corr,C_exact,F_abs,F_phase

Rows are ordered by probe site j (1..n), then time index ell (0..ell_max),
one row per grid point.  Floats are written with 12 significant digits,
LF line endings, UTF-8.  Identical config and seed produce byte-identical
files; the metadata echoes the resolved configuration but never the
output directory or a timestamp, for the same reason.

``F_abs`` and ``F_phase`` always reconstruct the point's commutator as
C = 2 - 2 F_abs cos(F_phase).  Measured pipelines store the raw measured
modulus with the classical fixed-node phase (so the reconstruction is
C_raw); the exact pipeline stores the exact modulus and phase (so the
reconstruction is C_exact).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._version import __version__
from .config import ExperimentConfig, config_echo
from .otoc import SpreadSurface

CSV_COLUMNS = ("j", "ell", "t", "C_raw", "C_tmem", "C_zne", "C_corr",
               "C_exact", "F_abs", "F_phase")
FLOAT_COLUMNS = CSV_COLUMNS[2:]
FORMAT_NAME = "spinweave-surface-v1"


def format_value(x: float) -> str:
    """12-significant-digit float formatting; NaN becomes the empty field."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{x:.12g}"


@dataclass(frozen=True)
class SurfaceTable:
    """Column-array view of a surface CSV."""

    columns: dict

    def __post_init__(self):
        missing = set(CSV_COLUMNS) - set(self.columns)
        if missing:
            raise ValueError(f"surface table missing columns {sorted(missing)}")

    @property
    def n(self) -> int:
        return int(self.columns["j"].max())

    @property
    def ell_max(self) -> int:
        return int(self.columns["ell"].max())

    def __len__(self) -> int:
        return self.columns["j"].size

    def grid(self, column: str) -> np.ndarray:
        """Column values reshaped to (n, ell_max + 1), indexed [j-1, ell]."""
        if column not in FLOAT_COLUMNS:
            raise ValueError(
                f"unknown surface column {column!r}; choose from {FLOAT_COLUMNS}")
        out = np.full((self.n, self.ell_max + 1), np.nan)
        j = self.columns["j"].astype(int)
        ell = self.columns["ell"].astype(int)
        out[j - 1, ell] = self.columns[column]
        return out


def surface_to_table(surface: SpreadSurface) -> SurfaceTable:
    n, l1 = surface.n, surface.ell_max + 1
    rows = n * l1
    cols = {
        "j": np.repeat(np.arange(1, n + 1), l1).astype(float),
        "ell": np.tile(np.arange(l1), n).astype(float),
        "t": np.empty(rows),
        "F_abs": np.empty(rows),
        "F_phase": np.empty(rows),
    }
    for name in ("raw", "tmem", "zne", "corr", "exact"):
        cols["C_" + name] = surface.variants[name].reshape(rows).copy()
    r = 0
    for j in range(1, n + 1):
        for ell in range(l1):
            pt = surface.points[j - 1][ell]
            cols["t"][r] = pt.t
            cols["F_abs"][r] = pt.f_abs
            cols["F_phase"][r] = pt.f_phase
            r += 1
    return SurfaceTable(cols)


def render_csv(table: SurfaceTable) -> str:
    lines = [",".join(CSV_COLUMNS)]
    j = table.columns["j"]
    ell = table.columns["ell"]
    for r in range(len(table)):
        row = [str(int(j[r])), str(int(ell[r]))]
        row += [format_value(float(table.columns[c][r])) for c in FLOAT_COLUMNS]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def surface_metadata(cfg: ExperimentConfig, table: SurfaceTable) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": __version__,
        "columns": list(CSV_COLUMNS),
        "rows": len(table),
        "seed": cfg.seed,
        "config": config_echo(cfg),
    }


def write_surface(surface: SpreadSurface, cfg: ExperimentConfig, out_dir,
                  basename: str = "surface"):
    """Write CSV and metadata; returns (csv_path, meta_path)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table = surface_to_table(surface)
    csv_path = out / f"{basename}.csv"
    csv_path.write_bytes(render_csv(table).encode("utf-8"))
    meta_path = out / f"{basename}.meta.json"
    meta = json.dumps(surface_metadata(cfg, table), sort_keys=True, indent=2) + "\n"
    meta_path.write_bytes(meta.encode("utf-8"))
    return csv_path, meta_path


def load_surface(path) -> SurfaceTable:
    """Read a surface CSV back into column arrays (empty fields become NaN)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(
                f"{path}: expected columns {CSV_COLUMNS}, got {reader.fieldnames}")
        raw_rows = list(reader)
    cols = {name: np.empty(len(raw_rows)) for name in CSV_COLUMNS}
    for r, row in enumerate(raw_rows):
        for name in CSV_COLUMNS:
            text = row[name]
            cols[name][r] = float(text) if text else np.nan
    return SurfaceTable(cols)


def diff_surfaces(a: SurfaceTable, b: SurfaceTable, column: str,
                  column_b: str | None = None) -> SurfaceTable:
    """Pointwise difference a[column] - b[column_b or column] on congruent
    grids, returned as a surface table with the difference stored under
    ``column`` and every other variant column empty."""
    if column not in FLOAT_COLUMNS[1:]:
        raise ValueError(f"unknown column {column!r}; choose from {FLOAT_COLUMNS[1:]}")
    column_b = column_b or column
    if column_b not in FLOAT_COLUMNS[1:]:
        raise ValueError(f"unknown column {column_b!r}; choose from {FLOAT_COLUMNS[1:]}")
    same_grid = (len(a) == len(b)
                 and np.array_equal(a.columns["j"], b.columns["j"])
                 and np.array_equal(a.columns["ell"], b.columns["ell"])
                 and np.allclose(a.columns["t"], b.columns["t"], atol=1e-12, rtol=0))
    if not same_grid:
        raise ValueError("surface grids are not congruent")
    cols = {name: np.full(len(a), np.nan) for name in CSV_COLUMNS}
    for name in ("j", "ell", "t"):
        cols[name] = a.columns[name].copy()
    cols[column] = a.columns[column] - b.columns[column_b]
    return SurfaceTable(cols)


def write_table(table: SurfaceTable, out_path, meta: dict | None = None):
    """Write a bare table (used for diffs); metadata sidecar optional."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes(render_csv(table).encode("utf-8"))
    if meta is not None:
        side = out_path.with_suffix(".meta.json")
        side.write_bytes((json.dumps(meta, sort_keys=True, indent=2) + "\n").encode())
    return out_path
