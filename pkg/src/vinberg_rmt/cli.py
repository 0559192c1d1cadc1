"""Command-line interface: ``vinberg-rmt {sample,theory,compare,wfun,profile}``.

Every command writes a CSV (header row, ``%.12e`` floats, ``%.15e`` for the
W table) and a JSON sidecar
holding ``schema_version``, the full configuration and the results.  Passing
a sidecar back through ``--config`` reruns the same command with the same
settings; flags given explicitly on the command line take precedence.

Exit codes: 0 on success, 1 on I/O errors, 2 on parameter or domain errors,
3 on convergence failures.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from . import io
from . import lambert_tsallis as lt
from .ensembles import (DISTRIBUTIONS, DaisyDims, EmpiricalSpectrum, WignerParams, WishartIndex,
                        compare, gram, sample_wigner_vinberg, sample_wishart_factor, spectrum)
from .errors import ConvergenceError, DomainError, ParameterError, VinbergError
from .laws import SpectralLaw
from .profile_solver import make_profile, solve_eta
from .wigner_limit import WignerLawParams, wigner_law
from .wishart_limit import (GeneralVinbergParams, TrapezoidProfile, general_vinberg_law, mp_law,
                            trapezoid_to_lt, wishart_law)

EXIT_OK, EXIT_IO, EXIT_PARAM, EXIT_CONVERGENCE = 0, 1, 2, 3
LAWS = ("wigner", "wishart", "general_vinberg", "mp")
PROFILE_KINDS = ("constant", "wigner_corner", "trapezoid", "general_vinberg", "custom")


# ---------------------------------------------------------------------------
# Shared builders
# ---------------------------------------------------------------------------

def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ParameterError(f"missing required option(s) {flags}")


def build_law(args) -> SpectralLaw:
    """Limiting law selected by ``--law`` and its parameter flags."""
    v = args.v
    if args.law == "wigner":
        _need(args, "c")
        return wigner_law(WignerLawParams(args.c, v))
    if args.law == "wishart":
        if args.kappa is not None:
            _need(args, "gamma")
            params = lt.LTParams(lt.parse_kappa(args.kappa), args.gamma)
        else:
            _need(args, "p", "alpha")
            params = trapezoid_to_lt(TrapezoidProfile(args.p, args.alpha, v))
        return wishart_law(params, v)
    if args.law == "general_vinberg":
        _need(args, "c", "m1", "m2")
        return general_vinberg_law(GeneralVinbergParams(args.c, args.m1, args.m2, v))
    if args.law == "mp":
        _need(args, "C")
        return mp_law(args.C, v)
    raise ParameterError(f"unknown law {args.law!r}")


def _add_law_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--law", choices=LAWS, default=None)
    p.add_argument("--c", type=float, default=None, help="hub fraction")
    p.add_argument("--v", type=float, default=1.0, help="entry variance")
    p.add_argument("--kappa", type=str, default=None, help="kappa (use 'inf' for +infinity)")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--p", type=float, default=None, help="trapezoid row fraction")
    p.add_argument("--alpha", type=float, default=None, help="trapezoid slope")
    p.add_argument("--m1", type=float, default=None)
    p.add_argument("--m2", type=float, default=None)
    p.add_argument("--C", type=float, default=None, help="Marchenko-Pastur ratio")


def _parse_complex(token: str) -> complex:
    try:
        return complex(token.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ParameterError(f"cannot parse complex number {token!r}") from exc


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "config", "command")}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_sample(args) -> int:
    """Sample one matrix and write its rescaled spectrum."""
    _need(args, "seed")
    if args.seed < 0 or args.seed >= 2**64:
        raise ParameterError("seed must be an unsigned 64-bit integer")
    n = args.n
    if args.ensemble == "wigner":
        if args.a is not None:
            k = args.k
            dims = DaisyDims(n, args.a, (n - args.a) // k, k)
        else:
            _need(args, "c")
            dims = DaisyDims.from_fraction(n, args.c, args.k)
        params = WignerParams(args.v, args.v_diag, args.dist)
        spec = spectrum(sample_wigner_vinberg(dims, params, args.seed), math.sqrt(n))
        extra = {"dims": vars_of(dims), "v_diag": params.v_diag}
    else:
        a = args.a if args.a is not None else n - 1
        dims = DaisyDims(n, a, n - a, 1)
        m1 = 1.0 if args.m1 is None else args.m1
        m2 = 0 if args.m2 is None else int(args.m2)
        index = WishartIndex(m1, m2, args.v)
        eta = sample_wishart_factor(dims, index, args.dist, args.seed)
        spec = spectrum(gram(eta, n))
        extra = {"dims": vars_of(dims), "N": eta.shape[1]}
    io.write_csv(args.out, ("index", "eigenvalue"), enumerate(spec.eigenvalues))
    io.write_report(io.sidecar(args.out), "sample", _config(args),
                    {"n": n, "min": spec.eigenvalues[0], "max": spec.eigenvalues[-1], **extra})
    return EXIT_OK


def vars_of(dims: DaisyDims) -> dict:
    return {"n": dims.n, "a": dims.a, "b": dims.b, "k": dims.k}


def cmd_theory(args) -> int:
    """Write the density of a limiting law on a padded uniform grid."""
    _need(args, "law")
    law = build_law(args)
    lo, hi = law.support_hull
    width = max(hi - lo, 1e-12)
    x = np.linspace(lo - args.pad * width, hi + args.pad * width, args.points)
    with np.errstate(all="ignore"):
        d = np.asarray(law.density(x), dtype=float)
    header = ("t", "f") if args.law == "wigner" else ("x", "density")
    io.write_csv(args.out, header, zip(x, d))
    io.write_report(io.sidecar(args.out), "theory", _config(args),
                    {"law": law.to_dict(), "total_mass": law.total_mass()})
    return EXIT_OK


def cmd_compare(args) -> int:
    """Compare an eigenvalue CSV with a limiting law."""
    _need(args, "eigs", "law")
    eigs = np.sort(io.read_column(args.eigs, "eigenvalue"))
    law = build_law(args)
    report = compare(EmpiricalSpectrum(eigs), law, args.bins, args.atom_window, args.pad)
    io.write_report(args.out, "compare", _config(args),
                    {**report.to_dict(), "law": law.to_dict()})
    return EXIT_OK


def cmd_wfun(args) -> int:
    """Tabulate the Lambert-Tsallis function; points in the closure of S get a marker row."""
    _need(args, "kappa", "gamma")
    params = lt.LTParams(lt.parse_kappa(args.kappa), args.gamma)
    points = [_parse_complex(t) for t in (args.z or [])]
    if args.real_grid:
        lo, hi, count = args.real_grid
        points += [complex(x) for x in np.linspace(float(lo), float(hi), int(count))]
    if not points:
        raise ParameterError("give at least one --z or a --real-grid")
    rows, marked = [], 0
    for z in points:
        try:
            w = complex(lt.w_main(z, params))
        except DomainError:
            rows.append((z.real, z.imag, "nan", "nan", "domain"))
            marked += 1
            continue
        res = abs(complex(lt.f_kg(w, params)) - z)
        rows.append((z.real, z.imag, w.real, w.imag, res))
    io.write_csv(args.out, ("re_z", "im_z", "re_w", "im_w", "residual"), rows, "%.15e")
    S = lt.forbidden_set(params)
    io.write_report(io.sidecar(args.out), "wfun", _config(args),
                    {"points": len(points), "domain_rows": marked,
                     "forbidden_set": {"case": S.case, "lo": S.lo, "hi": S.hi}})
    return EXIT_OK


def cmd_profile(args) -> int:
    """Numeric Stieltjes transform of a variance profile."""
    if args.kind == "custom":
        _need(args, "grid_in")
        profile = io.import_profile(args.grid_in)
    else:
        keys = {"constant": ("v",), "wigner_corner": ("c", "v"), "trapezoid": ("p", "alpha", "v"),
                "general_vinberg": ("c", "m1", "m2", "v")}[args.kind]
        _need(args, *keys)
        profile = make_profile(args.kind, args.m, **{k: getattr(args, k) for k in keys})
    if args.grid_out:
        io.export_profile(profile, args.grid_out)
    points = [_parse_complex(t) for t in (args.z or ["2j"])]
    rows = []
    for z in points:
        field = solve_eta(z, profile, tol=args.tol, max_iter=args.max_iter)
        s = field.stieltjes
        rows.append((z.real, z.imag, s.real, s.imag, field.iterations, field.residual))
    io.write_csv(args.out, ("re_z", "im_z", "re_s", "im_s", "iterations", "residual"), rows)
    io.write_report(io.sidecar(args.out), "profile", _config(args),
                    {"m": profile.m, "kind": profile.kind, "profile_params": profile.params})
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vinberg-rmt",
        description="Spectra of Wigner and Wishart ensembles on Vinberg matrix spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, out):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", default=None, help="JSON sidecar of an earlier run")
        p.add_argument("--out", default=out, help=f"output path (default {out})")
        p.set_defaults(func=func)
        return p

    p = add("sample", cmd_sample, "sample a matrix and write its rescaled eigenvalues",
            "eigenvalues.csv")
    p.add_argument("--ensemble", choices=("wigner", "wishart"), default="wigner")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--c", type=float, default=None, help="hub fraction (Wigner)")
    p.add_argument("--a", type=int, default=None, help="hub size (overrides --c)")
    p.add_argument("--k", type=int, default=1, help="petal size (Wigner)")
    p.add_argument("--v", type=float, default=1.0)
    p.add_argument("--v-diag", type=float, default=None, help="diagonal variance (default 2v)")
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="gaussian")
    p.add_argument("--m1", type=float, default=None, help="hub column multiplicity (Wishart)")
    p.add_argument("--m2", type=float, default=None, help="petal column multiplicity (Wishart)")
    p.add_argument("--seed", type=int, default=None)

    p = add("theory", cmd_theory, "tabulate a limiting density and describe the law",
            "density.csv")
    _add_law_flags(p)
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--pad", type=float, default=0.05, help="relative padding of the support")

    p = add("compare", cmd_compare, "compare an eigenvalue CSV with a limiting law",
            "report.json")
    p.add_argument("--eigs", default=None, help="CSV written by 'sample'")
    _add_law_flags(p)
    p.add_argument("--bins", type=int, default=200)
    p.add_argument("--atom-window", type=float, default=0.05)
    p.add_argument("--pad", type=float, default=0.02)

    p = add("wfun", cmd_wfun, "evaluate the Lambert-Tsallis function W", "wfun.csv")
    p.add_argument("--kappa", type=str, default=None, help="kappa (use 'inf' for +infinity)")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--z", action="append", default=None, help="point such as 2.5 or 1+2j")
    p.add_argument("--real-grid", nargs=3, metavar=("LO", "HI", "COUNT"), default=None)

    p = add("profile", cmd_profile, "numeric Stieltjes transform of a variance profile",
            "profile.csv")
    p.add_argument("--kind", choices=PROFILE_KINDS, default="constant")
    p.add_argument("--m", type=int, default=500, help="grid cells per side")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--v", type=float, default=1.0)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--m1", type=float, default=None)
    p.add_argument("--m2", type=float, default=None)
    p.add_argument("--z", action="append", default=None)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--grid-in", default=None, help="profile CSV for --kind custom")
    p.add_argument("--grid-out", default=None, help="export the profile grid here")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str], args) -> argparse.Namespace:
    doc = io.read_report(args.config)
    if doc.get("command") != args.command:
        raise ParameterError(f"{args.config} was written by {doc.get('command')!r}, "
                             f"not {args.command!r}")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    sub.set_defaults(**{k: v for k, v in doc["config"].items() if k in known})
    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            args = _apply_config(parser, argv, args)
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (VinbergError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
