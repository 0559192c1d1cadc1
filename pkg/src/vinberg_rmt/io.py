"""CSV and JSON helpers shared by the CLI and the experiment scripts.

CSV files carry a header row, ``%.12e`` floats and LF line endings.  JSON
reports carry ``schema_version`` and the exact configuration of the run, so
that a report can be fed back to the CLI as ``--config``.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .profile_solver import VarianceProfile

SCHEMA_VERSION = 1
FLOAT_FMT = "%.12e"


def fmt(x, float_fmt: str = FLOAT_FMT) -> str:
    """Format a number for CSV output (integers and strings pass through)."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return float_fmt % float(x)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence],
              float_fmt: str = FLOAT_FMT) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(x, float_fmt) for x in row])


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader if row]


def read_column(path, name: str) -> np.ndarray:
    """One numeric column of a CSV file."""
    header, rows = read_csv(path)
    if name not in header:
        raise ValueError(f"{path}: no column {name!r} (found {header})")
    j = header.index(name)
    return np.array([float(r[j]) for r in rows])


def jsonable(obj):
    """Recursively replace infinities by ``"inf"``/``"-inf"`` and numpy scalars by floats."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    return obj


def write_report(path, command: str, config: dict, payload: dict) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "config": config, **payload}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(jsonable(doc), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported schema_version {version!r}")
    return doc


def sidecar(path) -> Path:
    """``out.csv -> out.json``."""
    return Path(path).with_suffix(".json")


def export_profile(profile: VarianceProfile, csv_path) -> None:
    """Write the grid as ``m`` CSV rows and ``{kind, params, m}`` as a JSON sidecar."""
    np.savetxt(csv_path, profile.grid, fmt=FLOAT_FMT, delimiter=",", newline="\n")
    with open(sidecar(csv_path), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(jsonable({"schema_version": SCHEMA_VERSION, "kind": profile.kind,
                            "params": profile.params, "m": profile.m,
                            "v_scale": profile.v_scale}), fh, indent=2, sort_keys=True)
        fh.write("\n")


def import_profile(csv_path) -> VarianceProfile:
    """Inverse of :func:`export_profile` (the sidecar is optional)."""
    grid = np.loadtxt(csv_path, delimiter=",", ndmin=2)
    meta_path = sidecar(csv_path)
    if meta_path.exists():
        with open(meta_path, encoding="utf-8") as fh:
            meta = json.load(fh)
        return VarianceProfile(grid, float(meta.get("v_scale", 1.0)), meta.get("kind", "custom"),
                               meta.get("params", {}))
    return VarianceProfile(grid)
