"""Numerical solver for the variance-profile fixed-point equation.

For a bounded symmetric profile ``sigma`` on the unit square the Stieltjes
transform of the limiting spectrum is ``S(z) = int_0^1 eta_z(x) dx``, where
``eta_z`` is the unique upper-half-plane solution of

    eta_z(x) = -1 / (z + int_0^1 sigma(x, y) eta_z(y) dy).

Profiles are discretized on an ``m x m`` grid of exact cell averages and the
discrete equation is solved by damped Picard iteration with continuation in
``Im z``.  This module is the independent oracle for the closed-form
transforms in :mod:`vinberg_rmt.wigner_limit` and
:mod:`vinberg_rmt.wishart_limit`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError


@dataclass(frozen=True)
class VarianceProfile:
    """Piecewise-constant symmetric profile on the ``m x m`` cells of the unit square.

    Attributes
    ----------
    grid : ndarray, shape (m, m)
        Cell averages (already multiplied by ``v_scale``).
    v_scale : float
        Nominal variance level used to build the grid (metadata).
    kind : str
        Constructor name, echoed in exports.
    params : dict
        Constructor parameters.
    """

    grid: np.ndarray = field(repr=False)
    v_scale: float = 1.0
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ParameterError("profile grid must be square")
        if not np.all(np.isfinite(g)) or np.any(g < 0):
            raise ParameterError("profile entries must be finite and non-negative")
        if not np.allclose(g, g.T, rtol=0, atol=1e-12):
            raise ParameterError("profile grid must be symmetric")
        object.__setattr__(self, "grid", g)

    @property
    def m(self) -> int:
        return self.grid.shape[0]


@dataclass
class EtaField:
    """Discrete solution ``eta_z`` on the cell midpoints."""

    values: np.ndarray
    z: complex
    converged: bool
    iterations: int
    residual: float
    history: list = field(default_factory=list, repr=False)

    @property
    def stieltjes(self) -> complex:
        return complex(np.mean(self.values))


# ---------------------------------------------------------------------------
# Profile construction
# ---------------------------------------------------------------------------

def _interval_fraction(lo: np.ndarray, hi: np.ndarray, cut: float, above: bool) -> np.ndarray:
    """Fraction of each ``[lo, hi]`` lying above (or below) ``cut``."""
    h = hi - lo
    if above:
        return np.clip((hi - np.maximum(lo, cut)) / h, 0.0, 1.0)
    return np.clip((np.minimum(hi, cut) - lo) / h, 0.0, 1.0)


def _region_above_line(m: int, x_cut: float, intercept: float, slope: float) -> np.ndarray:
    """Exact cell averages of the indicator of ``{x < x_cut, y >= intercept + slope x}``.

    For a fixed cell ``[x0, x1] x [y0, y1]`` the covered length in ``y`` is
    piecewise linear in ``x`` with kinks where the line crosses ``y0`` or
    ``y1``, so the trapezoid rule between those breakpoints is exact.
    """
    edges = np.linspace(0.0, 1.0, m + 1)
    y0, y1 = edges[:-1], edges[1:]
    h = 1.0 / m
    out = np.zeros((m, m))
    for i in range(m):
        x0, x1 = edges[i], min(edges[i + 1], x_cut)
        if x1 <= x0:
            break
        pts = [np.full(m, x0), np.full(m, x1)]
        if slope != 0:
            for level in (y0, y1):
                xb = (level - intercept) / slope
                pts.append(np.clip(xb, x0, x1))
        xs = np.sort(np.stack(pts), axis=0)
        line = intercept + slope * xs
        covered = np.clip(y1[None, :] - np.maximum(y0[None, :], line), 0.0, h)
        integral = 0.5 * ((covered[1:] + covered[:-1]) * np.diff(xs, axis=0)).sum(axis=0)
        out[i] = integral / (h * h)
    return out


def make_profile(kind: str, m: int, **params) -> VarianceProfile:
    """Build a cell-averaged profile.

    Parameters
    ----------
    kind : {"constant", "wigner_corner", "trapezoid", "general_vinberg", "custom"}
        ``constant(v)``; ``wigner_corner(c, v)`` is ``v`` on
        ``min(x, y) <= c``; ``trapezoid(p, alpha, v)`` is ``v`` on
        ``x < p, y >= p + alpha x`` and its mirror; ``general_vinberg(c, m1,
        m2, v)`` is ``v`` on ``x < c p', y >= p' + m1 x`` and its mirror with
        ``p' = 1/(1 + m1 + m2 (1 - c))``; ``custom(grid)`` takes a grid as is.
    m : int
        Number of cells per side.

    Returns
    -------
    VarianceProfile
        Cells cut by a region boundary carry the exact covered area fraction
        times ``v``.
    """
    if kind == "custom":
        grid = np.asarray(params["grid"], dtype=float)
        return VarianceProfile(grid, float(params.get("v", 1.0)), "custom", {})
    if m < 1:
        raise ParameterError("m must be positive")
    v = float(params.get("v", 1.0))
    if not v > 0:
        raise ParameterError("v must be positive")
    edges = np.linspace(0.0, 1.0, m + 1)
    if kind == "constant":
        grid = np.full((m, m), v)
        meta = {"v": v}
    elif kind == "wigner_corner":
        c = float(params["c"])
        if not 0.0 <= c <= 1.0:
            raise ParameterError("c must lie in [0, 1]")
        above = _interval_fraction(edges[:-1], edges[1:], c, above=True)
        grid = v * (1.0 - np.outer(above, above))
        meta = {"c": c, "v": v}
    elif kind in ("trapezoid", "general_vinberg"):
        if kind == "trapezoid":
            p, alpha = float(params["p"]), float(params["alpha"])
            if not 0.0 < p < 1.0 or not 0.0 <= alpha <= (1.0 - p) / p * (1 + 1e-12):
                raise ParameterError("need 0 < p < 1 and 0 <= alpha <= (1 - p)/p")
            x_cut, intercept, slope = p, p, alpha
            meta = {"p": p, "alpha": alpha, "v": v}
        else:
            c, m1, m2 = float(params["c"]), float(params["m1"]), float(params["m2"])
            if not 0.0 < c <= 1.0 or m1 < 0 or m2 < 0 or m1 + m2 <= 0:
                raise ParameterError("need 0 < c <= 1, m1, m2 >= 0 and m1 + m2 > 0")
            pp = 1.0 / (1.0 + m1 + m2 * (1.0 - c))
            x_cut, intercept, slope = c * pp, pp, m1
            meta = {"c": c, "m1": m1, "m2": m2, "v": v, "p_prime": pp}
        half = _region_above_line(m, x_cut, intercept, slope)
        grid = v * (half + half.T)
    else:
        raise ParameterError(f"unknown profile kind {kind!r}")
    return VarianceProfile(grid, v, kind, meta)


# ---------------------------------------------------------------------------
# Fixed-point solver
# ---------------------------------------------------------------------------

def _picard(z: complex, A: np.ndarray, seed: np.ndarray, tol: float, max_iter: int,
            damping: float) -> EtaField:
    m = A.shape[0]
    eta = seed.astype(complex)
    history = []
    res = math.inf
    for it in range(1, max_iter + 1):
        g = -1.0 / (z + (A @ eta.real + 1j * (A @ eta.imag)) / m)
        res = float(np.max(np.abs(g - eta)))
        if it % 50 == 1:
            history.append(res)
        if res <= tol:
            return EtaField(g, z, True, it, res, history)
        if not math.isfinite(res):
            break
        eta = (1.0 - damping) * eta + damping * g
    history.append(res)
    return EtaField(eta, z, False, max_iter, res, history)


def _newton(z: complex, A: np.ndarray, seed: np.ndarray, tol: float, max_iter: int = 50) -> EtaField:
    """Newton on ``eta (z + A eta/m) + 1 = 0`` (fallback only)."""
    m = A.shape[0]
    eta = seed.astype(complex)
    history = []
    for it in range(1, max_iter + 1):
        lin = z + A @ eta / m
        F = eta * lin + 1.0
        J = np.diag(lin) + eta[:, None] * A / m
        eta = eta - np.linalg.solve(J, F)
        g = -1.0 / (z + A @ eta / m)
        res = float(np.max(np.abs(g - eta)))
        history.append(res)
        if res <= tol:
            return EtaField(g, z, True, it, res, history)
    return EtaField(eta, z, False, max_iter, history[-1], history)


def solve_eta(z, profile: VarianceProfile, tol: float = 1e-10, max_iter: int = 10_000,
              damping: float = 0.5, seed: np.ndarray | None = None,
              newton_fallback: bool = False) -> EtaField:
    """Solve the discretized fixed-point equation at ``z``.

    Damped Picard iteration ``eta <- (1 - w) eta + w G(eta)`` seeded with
    ``-1/z``.  For ``Im z <= 1`` the solve starts at ``z + i`` and walks
    ``Im z`` down in steps of 0.1, reusing each solution as the next seed.

    Parameters
    ----------
    z : complex
        Spectral parameter, ``Im z > 0``.
    profile : VarianceProfile
    tol : float
        Sup-norm bound on ``|G(eta) - eta|`` at return.
    max_iter : int
        Picard iterations allowed per continuation stage.
    damping : float
        Relaxation weight ``w``.
    seed : ndarray, optional
        Initial field (defaults to ``-1/z``); used only without continuation.
    newton_fallback : bool
        Retry a failed stage with Newton's method.

    Raises
    ------
    DomainError
        If ``Im z <= 0``.
    ConvergenceError
        If a stage does not converge; ``diagnostics`` carries the residual
        history.
    """
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("solve_eta needs Im z > 0")
    A = profile.grid
    m = profile.m
    if z.imag > 1.0:
        stages = [z]
    else:
        stages = [complex(z.real, z.imag + 1.0 - 0.1 * k) for k in range(10)] + [z]
        seed = None
    eta = np.full(m, -1.0 / stages[0]) if seed is None else np.asarray(seed, dtype=complex)
    total = 0
    field_ = None
    for zs in stages:
        field_ = _picard(zs, A, eta, tol, max_iter, damping)
        if not field_.converged and newton_fallback:
            field_ = _newton(zs, A, field_.values, tol)
        total += field_.iterations
        if not field_.converged:
            raise ConvergenceError(
                f"fixed point did not converge at z = {zs} (residual {field_.residual:.3e})",
                {"z": zs, "residual_history": field_.history, "iterations": total})
        eta = field_.values
    field_.iterations = total
    return field_


def stieltjes_numeric(z, profile: VarianceProfile, **kwargs) -> complex:
    """Numeric Stieltjes transform: the cell average of ``eta_z``."""
    return solve_eta(z, profile, **kwargs).stieltjes


# ---------------------------------------------------------------------------
# Density recovery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderEstimate:
    """Extrapolated boundary value of ``Im S / pi``.

    ``singular`` is set when the ladder values grow at least like
    ``y^(-1/2)``, which signals an atom or a density blow-up at ``x``.
    """

    value: float
    singular: bool
    rungs: tuple


def _neville_at_zero(ys: Sequence[float], vals: Sequence[float]) -> float:
    p = list(vals)
    n = len(ys)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (ys[i + k] * p[i] - ys[i] * p[i + 1]) / (ys[i + k] - ys[i])
    return p[0]


def ladder_extrapolate(S_fn: Callable[[complex], complex], x: float,
                       y_ladder: Sequence[float] = (1e-2, 1e-3, 1e-4)) -> LadderEstimate:
    """Polynomial (Richardson) extrapolation of ``Im S(x + iy)/pi`` to ``y = 0``."""
    ys = [float(y) for y in y_ladder]
    if len(ys) < 3 or any(b >= a for a, b in zip(ys, ys[1:])) or ys[-1] <= 0:
        raise ParameterError("y_ladder needs at least 3 strictly decreasing positive rungs")
    vals = [complex(S_fn(complex(x, y))).imag / math.pi for y in ys]
    singular = all(
        vals[i + 1] > 0 and vals[i + 1] / max(vals[i], 1e-300) >= math.sqrt(ys[i] / ys[i + 1])
        for i in range(len(ys) - 1))
    value = math.inf if singular else max(_neville_at_zero(ys, vals), 0.0)
    return LadderEstimate(value, singular, tuple(vals))


def density_from_stieltjes(S_fn: Callable[[complex], complex], x: float,
                           y_ladder: Sequence[float] = (1e-2, 1e-3, 1e-4)) -> float:
    """Density at ``x`` recovered from a Stieltjes transform.

    Returns ``inf`` when the ladder diverges (atom or singular point).
    """
    return ladder_extrapolate(S_fn, x, y_ladder).value
