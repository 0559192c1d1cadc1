"""Wishart-Vinberg spectra against the Lambert-Tsallis laws.

Runs the triangular factor (Dykema-Haagerup limit) and the three trapezoid
profiles with ``gamma = -1`` and ``N = 2n`` columns: ``alpha = 1/2, 1, 2``,
that is ``kappa = 2, inf, -1``.  Writes one histogram table per run and
``summary.json``.

Example
-------
    python scripts/wishart_sweep.py --n 4000 --out runs/wishart
"""

from __future__ import annotations

import argparse
from pathlib import Path

from _common import histogram_table, write_summary
from vinberg_rmt import lambert_tsallis as lt
from vinberg_rmt.ensembles import DaisyDims, WishartIndex, gram, sample_wishart_factor, spectrum
from vinberg_rmt.wishart_limit import TrapezoidProfile, trapezoid_to_lt, wishart_law


def runs(n: int):
    yield "triangular", 1.0, 0, lt.LTParams(lt.INF, 0.0)
    for alpha, m1, m2 in ((0.5, 0.5, 3 * n // 2), (1.0, 1.0, n), (2.0, 2.0, 0)):
        yield f"alpha{alpha:g}", m1, m2, trapezoid_to_lt(TrapezoidProfile(1 / 3, alpha))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4000)
    ap.add_argument("--bins", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--out", type=Path, default=Path("runs/wishart"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    n, rows = args.n, []
    for i, (name, m1, m2, params) in enumerate(runs(n)):
        dims = DaisyDims(n, n - 1, 1)
        eta = sample_wishart_factor(dims, WishartIndex(m1, m2), "gaussian", args.seed + i)
        spec = spectrum(gram(eta, n))
        report = histogram_table(args.out / f"hist_{name}.csv", spec, wishart_law(params), args.bins)
        rows.append({"run": name, "kappa": lt.format_kappa(params.kappa), "gamma": params.gamma,
                     "N": eta.shape[1], "max_eigenvalue": float(spec.eigenvalues[-1]), **report})
    write_summary(args.out / "summary.json", rows)


if __name__ == "__main__":
    main()
