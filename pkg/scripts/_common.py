"""Helpers shared by the experiment scripts (histogram tables and summaries)."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from vinberg_rmt import io
from vinberg_rmt.ensembles import EmpiricalSpectrum, compare, empirical_measure
from vinberg_rmt.laws import SpectralLaw


def histogram_table(path: Path, spec: EmpiricalSpectrum, law: SpectralLaw, bins: int) -> dict:
    """Write ``center,empirical,theory`` densities and return the comparison report."""
    report = compare(spec, law, bins=bins)
    edges = np.linspace(*report.edges, bins + 1)
    width = edges[1] - edges[0]
    centers = 0.5 * (edges[:-1] + edges[1:])
    emp = empirical_measure(spec.eigenvalues).histogram(edges) / width
    with np.errstate(all="ignore"):
        theory = np.asarray(law.density(centers), dtype=float)
    io.write_csv(path, ("center", "empirical", "theory"), zip(centers, emp, theory))
    return report.to_dict()


def write_summary(path: Path, rows: list[dict]) -> None:
    path.write_text(json.dumps(io.jsonable(rows), indent=2) + "\n", encoding="utf-8")
    for row in rows:
        print(", ".join(f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}"
                        for k, v in row.items() if not isinstance(v, (list, dict))))
