"""Grid refinement of the numeric profile solver against the closed-form transforms.

Prints ``|S_numeric - S_closed|`` at a few points for each profile and grid
size, and writes the table to ``profile_oracles.csv``.

Example
-------
    python scripts/profile_oracles.py --m 250 500 1000 2000
"""

from __future__ import annotations

import argparse
from pathlib import Path

from vinberg_rmt import io
from vinberg_rmt.profile_solver import make_profile, stieltjes_numeric
from vinberg_rmt.wigner_limit import WignerLawParams, wigner_stieltjes
from vinberg_rmt.wishart_limit import (GeneralVinbergParams, TrapezoidProfile, general_vinberg_T,
                                       stieltjes_S)


def cases():
    yield "wigner_corner", {"c": 0.3}, lambda z: wigner_stieltjes(z, WignerLawParams(0.3))
    for p, alpha in ((0.5, 1.0), (0.25, 2.0), (0.5, 0.0), (1 / 3, 0.5)):
        prof = TrapezoidProfile(p, alpha)
        yield "trapezoid", {"p": p, "alpha": alpha}, lambda z, prof=prof: stieltjes_S(z, prof)
    gp = GeneralVinbergParams(0.5, 1, 1)
    yield ("general_vinberg", {"c": 0.5, "m1": 1, "m2": 1},
           lambda z: (2 * gp.p_prime - 1) / z + 2 * z * general_vinberg_T(z * z / gp.p_prime, gp))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, nargs="+", default=[250, 500, 1000, 2000])
    ap.add_argument("--z", type=complex, nargs="+", default=[0.5j, 1j, 2j, 1 + 1j])
    ap.add_argument("--out", type=Path, default=Path("profile_oracles.csv"))
    args = ap.parse_args()
    rows = []
    for kind, params, oracle in cases():
        label = kind + " " + " ".join(f"{k}={v:.4g}" for k, v in params.items())
        for m in args.m:
            prof = make_profile(kind, m, **params)
            err = max(abs(stieltjes_numeric(z, prof) - oracle(z)) for z in args.z)
            rows.append((label, m, err))
            print(f"{label:40s} m={m:5d}  max error={err:.2e}")
    io.write_csv(args.out, ("profile", "m", "max_error"), rows)


if __name__ == "__main__":
    main()
