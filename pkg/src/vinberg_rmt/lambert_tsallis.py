"""Tsallis deformed exponentials and the Lambert-Tsallis function.

The generalized Tsallis function is

    f_{kappa,gamma}(z) = z / (1 + gamma z) * exp_kappa(z),
    exp_kappa(z) = (1 + z / kappa) ** kappa     (principal power),

with the convention ``exp_inf = exp``.  Its main-branch inverse
``W_{kappa,gamma}`` is holomorphic on the complement of the closure of a real
interval ``S`` (the forbidden set).  This module evaluates ``f``, ``W``,
``S`` and the two conjugate boundary preimages ``K_+`` and ``K_-`` of points
of ``S``.

``kappa`` is an extended real stored as a float; ``math.inf`` is the
positive-infinity tag and every formula has an explicit infinite branch, so a
large finite ``kappa`` is never used as a stand-in.

Parameters with ``kappa < 0`` are handled through the homographic identity
``f_{kappa,gamma}(z) = f_{kappa',gamma'}(z / (1 + z / kappa))`` with
``kappa' = -kappa`` and ``gamma' = gamma - 1 / kappa``.  The reduced pair can
have ``0 < kappa' < 1``, which is outside the public admissible range, so the
numerical kernels below work on raw ``(kappa, gamma)`` floats and the public
API validates only the user-facing :class:`LTParams`.
"""

from __future__ import annotations

import cmath
import functools
import math
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import BranchCutError, ConvergenceError, DomainError, ParameterError, PoleError

INF = math.inf

#: Relative slack used when snapping ``gamma`` onto the admissibility
#: boundaries ``gamma = 1/kappa`` and ``gamma = 0``.
SNAP_TOL = 1e-12


def parse_kappa(value) -> float:
    """Convert a user-supplied kappa (number or the token ``"inf"``) to a float.

    Parameters
    ----------
    value : float, int or str
        ``"inf"``, ``"+inf"``, ``"infinity"`` (any case) or a number.

    Returns
    -------
    float
        ``math.inf`` for the infinite tag, otherwise the finite value.
    """
    if isinstance(value, str):
        token = value.strip().lower()
        if token in {"inf", "+inf", "infinity", "+infinity"}:
            return INF
        try:
            value = float(token)
        except ValueError as exc:
            raise ParameterError(f"cannot parse kappa {value!r}") from exc
    value = float(value)
    if math.isnan(value) or value == -INF:
        raise ParameterError(f"kappa must be finite or +inf, got {value}")
    return value


def format_kappa(kappa: float) -> str:
    """Inverse of :func:`parse_kappa` for reports (``inf`` or ``repr``)."""
    return "inf" if kappa == INF else repr(float(kappa))


def _inv(kappa: float) -> float:
    return 0.0 if kappa == INF else 1.0 / kappa


def _is_int(x: float) -> bool:
    return math.isfinite(x) and float(x).is_integer()


@dataclass(frozen=True)
class LTParams:
    """Admissible Lambert-Tsallis parameter pair ``(kappa, gamma)``.

    Admissibility means ``gamma < 1`` and ``gamma <= 1/kappa <= 1`` with
    ``1/inf = 0``; in particular ``kappa`` lies in ``(-inf, 0)``,
    ``[1, inf)`` or is ``inf``, and the region ``kappa * gamma > 1`` is
    rejected.  Values of ``gamma`` within ``1e-12`` of ``1/kappa`` or of ``0``
    are snapped onto them so that boundary cases obtained from rounded
    arithmetic (e.g. ``(2p - 1)/p`` with ``p = 1/3``) are classified
    correctly.
    """

    kappa: float
    gamma: float

    def __post_init__(self):
        kappa = parse_kappa(self.kappa)
        gamma = float(self.gamma)
        if not math.isfinite(gamma):
            raise ParameterError(f"gamma must be finite, got {gamma}")
        if kappa == 0 or (0 < kappa < 1):
            raise ParameterError(
                f"inadmissible (kappa, gamma) = ({kappa}, {gamma}): need gamma <= 1/kappa <= 1")
        inv = _inv(kappa)
        if abs(gamma - inv) <= SNAP_TOL * max(1.0, abs(inv)):
            gamma = inv
        elif abs(gamma) <= SNAP_TOL:
            gamma = 0.0
        if not gamma < 1 or gamma > inv:
            raise ParameterError(
                f"inadmissible (kappa, gamma) = ({format_kappa(kappa)}, {gamma}): "
                "need gamma < 1 and gamma <= 1/kappa <= 1")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "gamma", gamma)

    @property
    def inv_kappa(self) -> float:
        """``1/kappa`` with ``1/inf = 0``."""
        return _inv(self.kappa)

    @property
    def is_negative(self) -> bool:
        return self.kappa < 0

    def reduced(self) -> tuple[float, float]:
        """Raw ``(kappa', gamma')`` with ``kappa' > 0`` on which the kernels run."""
        if self.kappa < 0:
            return -self.kappa, self.gamma - 1.0 / self.kappa
        return self.kappa, self.gamma


# ---------------------------------------------------------------------------
# Elementary functions
# ---------------------------------------------------------------------------

def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return complex(arr) if scalar else arr


def _principal_power(base: np.ndarray, expo: float, *, check_cut: bool) -> np.ndarray:
    if check_cut and not _is_int(expo):
        if np.any((base.imag == 0) & (base.real <= 0)):
            raise BranchCutError(f"argument on the branch cut of the power {expo}")
    if expo < 0 and np.any(base == 0):
        raise PoleError("zero base raised to a negative power")
    return np.power(base, expo)


def exp_kappa(z, kappa):
    """Tsallis exponential ``(1 + z/kappa)**kappa`` on the principal branch.

    Parameters
    ----------
    z : complex or array_like
        Argument(s).
    kappa : float or str
        Deformation parameter; ``inf`` gives the ordinary exponential.

    Returns
    -------
    complex or ndarray

    Raises
    ------
    BranchCutError
        If ``1 + z/kappa`` is a non-positive real and ``kappa`` is not an
        integer (for integer ``kappa`` the power is single valued).
    PoleError
        If ``1 + z/kappa = 0`` with ``kappa < 0``.
    """
    kappa = parse_kappa(kappa)
    arr, scalar = _as_complex(z)
    if kappa == INF:
        return _ret(np.exp(arr), scalar)
    if kappa == 0:
        raise ParameterError("exp_kappa needs kappa != 0")
    out = _principal_power(1.0 + arr / kappa, kappa, check_cut=True)
    return _ret(out, scalar)


def ln_kappa(z, kappa):
    """Tsallis logarithm ``(z**kappa - 1)/kappa``; ``kappa = 0`` gives ``log``.

    The difference is computed as ``expm1(kappa*log z)/kappa`` so that it
    stays accurate near ``z = 1``.  For ``kappa = 1/kappa_0`` this inverts
    :func:`exp_kappa` with parameter ``kappa_0`` on the sector
    ``|kappa_0 Arg(1 + z/kappa_0)| < pi``.

    Raises
    ------
    BranchCutError
        If ``z`` is a non-positive real and ``kappa`` is not an integer.
    """
    kappa = parse_kappa(kappa)
    arr, scalar = _as_complex(z)
    on_cut = (arr.imag == 0) & (arr.real <= 0)
    if kappa == 0:
        if np.any(on_cut):
            raise BranchCutError("log argument on the cut (-inf, 0]")
        return _ret(np.log(arr), scalar)
    if kappa == INF:
        raise ParameterError("ln_kappa needs a finite kappa")
    if not _is_int(kappa) and np.any(on_cut):
        raise BranchCutError(f"argument on the branch cut of the power {kappa}")
    if kappa < 0 and np.any(arr == 0):
        raise PoleError("ln_kappa has a pole at 0 for kappa < 0")
    zero = arr == 0
    safe = np.where(zero, 1.0, arr)
    out = np.expm1(kappa * np.log(safe)) / kappa
    out = np.where(zero, -1.0 / kappa, out)
    return _ret(out, scalar)


def _f_array(z: np.ndarray, kappa: float, gamma: float) -> np.ndarray:
    denom = 1.0 + gamma * z
    if np.any(denom == 0):
        raise PoleError(f"pole of f at z = -1/gamma = {-1.0 / gamma}")
    if kappa == INF:
        e = np.exp(z)
    else:
        e = _principal_power(1.0 + z / kappa, kappa, check_cut=True)
    return z * e / denom


def _fprime_array(z: np.ndarray, kappa: float, gamma: float) -> np.ndarray:
    denom = 1.0 + gamma * z
    if np.any(denom == 0):
        raise PoleError(f"pole of f' at z = -1/gamma = {-1.0 / gamma}")
    poly = gamma * z * z + (1.0 + _inv(kappa)) * z + 1.0
    if kappa == INF:
        e = np.exp(z)
    else:
        e = _principal_power(1.0 + z / kappa, kappa - 1.0, check_cut=True)
    return poly / denom**2 * e


def f_kg(z, params: LTParams):
    """Generalized Tsallis function ``z/(1 + gamma z) * exp_kappa(z)``.

    Raises
    ------
    PoleError
        At ``z = -1/gamma``.
    BranchCutError
        On the cut of the principal power (non-integer ``kappa``).
    """
    arr, scalar = _as_complex(z)
    return _ret(_f_array(arr, params.kappa, params.gamma), scalar)


def f_kg_prime(z, params: LTParams):
    """Derivative of :func:`f_kg`.

    Uses the factorized form ``(gamma z^2 + (1 + 1/kappa) z + 1) /
    (1 + gamma z)^2 * (1 + z/kappa)^(kappa - 1)``.
    """
    arr, scalar = _as_complex(z)
    return _ret(_fprime_array(arr, params.kappa, params.gamma), scalar)


# ---------------------------------------------------------------------------
# Critical points and forbidden set
# ---------------------------------------------------------------------------

def _critical_raw(kappa: float, gamma: float) -> tuple[float, float]:
    lin = 1.0 + _inv(kappa)
    if gamma == 0:
        return -INF, -1.0 / lin
    disc = lin * lin - 4.0 * gamma
    sq = math.sqrt(max(disc, 0.0))
    # Numerically stable pair of roots of gamma z^2 + lin z + 1.
    q = -0.5 * (lin + math.copysign(sq, lin))
    r1, r2 = q / gamma, 1.0 / q
    return (r1, r2) if r1 <= r2 else (r2, r1)


def critical_points(params: LTParams) -> tuple[float, float]:
    """Ordered real roots ``alpha1 <= alpha2`` of ``gamma z^2 + (1+1/kappa) z + 1``.

    For ``gamma = 0`` the quadratic degenerates and ``alpha1`` is returned as
    the sentinel ``-inf`` with ``alpha2 = -kappa/(kappa + 1)`` (``-1`` for
    ``kappa = inf``).
    """
    return _critical_raw(params.kappa, params.gamma)


def _critical_value(alpha: float, kappa: float) -> float:
    """``f(alpha) = -alpha^2 (1 + alpha/kappa)^(kappa - 1)`` at a critical point.

    Values beyond the float range (``|gamma|`` tiny, so ``alpha`` huge) are
    returned as ``-inf``.
    """
    try:
        return _critical_value_raw(alpha, kappa)
    except OverflowError:
        return -INF


def _critical_value_raw(alpha: float, kappa: float) -> float:
    if kappa == INF:
        return -alpha * alpha * math.exp(alpha)
    base = 1.0 + alpha / kappa
    if base == 0:
        return -INF if kappa < 1 else 0.0
    if base < 0:
        # Only reached for integer kappa (kappa = 1 in case S4): real power.
        return -alpha * alpha * base ** (kappa - 1.0)
    return -alpha * alpha * base ** (kappa - 1.0)


@dataclass(frozen=True)
class ForbiddenSet:
    """Real interval ``(lo, hi)`` missed by ``f`` on the real line.

    ``case`` is one of ``"S1"``, ``"S2"``, ``"S3"``, ``"S4"``; ``lo`` is
    ``-inf`` for the half-line cases S2 and S3.
    """

    case: str
    lo: float
    hi: float

    def contains(self, x) -> np.ndarray | bool:
        """Open-interval membership."""
        x = np.asarray(x, dtype=float)
        out = (x > self.lo) & (x < self.hi)
        return bool(out) if out.ndim == 0 else out

    def in_closure(self, x) -> np.ndarray | bool:
        x = np.asarray(x, dtype=float)
        out = (x >= self.lo) & (x <= self.hi)
        return bool(out) if out.ndim == 0 else out


def _classify(kappa: float, gamma: float) -> str:
    if kappa < 0:
        gp = gamma - 1.0 / kappa
        return "S3" if gp == 0 else "S1"
    if gamma < 0:
        return "S1"
    if kappa == 1 and gamma > 0:
        return "S4"
    return "S2"


def forbidden_set(params: LTParams) -> ForbiddenSet:
    """Forbidden set ``S`` of ``f_{kappa,gamma}`` with its case label.

    The four cases are: S1 a bounded interval ``(f(alpha2), f(alpha1))``;
    S2 the half-line ``(-inf, f(alpha2))``; S3 the half-line
    ``(-inf, f(alpha1))`` (``kappa < 0`` with ``gamma = 1/kappa``); S4 the
    bounded interval ``(f(alpha1), f(alpha2))`` for ``kappa = 1``,
    ``gamma > 0``.  For ``kappa < 0`` the label is decided by
    ``gamma' = gamma - 1/kappa``.
    """
    kappa, gamma = params.kappa, params.gamma
    case = _classify(kappa, gamma)
    a1, a2 = _critical_raw(kappa, gamma)
    if case == "S3":
        return ForbiddenSet("S3", -INF, _critical_value(a1, kappa))
    if case == "S2":
        return ForbiddenSet("S2", -INF, _critical_value(a2, kappa))
    v1, v2 = _critical_value(a1, kappa), _critical_value(a2, kappa)
    return ForbiddenSet(case, min(v1, v2), max(v1, v2))


# ---------------------------------------------------------------------------
# Homographic reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomographicReduction:
    """Result of :func:`homographic_reduce`.

    ``kappa``/``gamma`` are the reduced raw parameters (``kappa > 0``).
    ``forward`` maps original to reduced coordinates
    ``z -> z/(1 + z/kappa_orig)`` and ``inverse`` maps back.
    """

    kappa: float
    gamma: float
    forward: Callable
    inverse: Callable


def homographic_reduce(params: LTParams) -> HomographicReduction:
    """Reduce a ``kappa < 0`` pair to ``(kappa', gamma') = (-kappa, gamma - 1/kappa)``.

    Raises
    ------
    ParameterError
        If ``kappa >= 0``.
    """
    kappa = params.kappa
    if not kappa < 0:
        raise ParameterError("homographic reduction needs kappa < 0")
    kp, gp = params.reduced()

    def forward(z):
        return np.asarray(z, dtype=complex) / (1.0 + np.asarray(z, dtype=complex) / kappa)

    def inverse(zp):
        zp = np.asarray(zp, dtype=complex)
        return zp / (1.0 + zp / kp)

    return HomographicReduction(kp, gp, forward, inverse)


# ---------------------------------------------------------------------------
# Main branch W
# ---------------------------------------------------------------------------

def taylor_coefficients(kappa: float, gamma: float) -> tuple[float, float, float]:
    """First three Taylor coefficients of ``W`` at 0.

    ``W(z) = z + (gamma - 1) z^2 + (gamma^2 - 3 gamma + (3 kappa + 1)/(2 kappa)) z^3
    + O(z^4)``; the last term tends to ``3/2`` as ``kappa -> inf``.  The
    coefficients follow from Lagrange inversion of ``f``.
    """
    kappa = parse_kappa(kappa)
    c3 = gamma * gamma - 3.0 * gamma + 1.5 + 0.5 * _inv(kappa)
    return 1.0, gamma - 1.0, c3


def w_taylor(z, kappa, gamma):
    """Three-term Taylor polynomial of ``W`` at 0."""
    _, c2, c3 = taylor_coefficients(kappa, gamma)
    z = np.asarray(z, dtype=complex)
    return z + c2 * z * z + c3 * z**3


def _fs(w: complex, k: float, g: float) -> complex:
    e = cmath.exp(w) if k == INF else (1.0 + w / k) ** k
    return w * e / (1.0 + g * w)


def _fps(w: complex, k: float, g: float) -> complex:
    e = cmath.exp(w) if k == INF else (1.0 + w / k) ** (k - 1.0)
    return (g * w * w + (1.0 + _inv(k)) * w + 1.0) / (1.0 + g * w) ** 2 * e


def _sector_ok(w: complex, k: float, g: float) -> bool:
    """Necessary condition for ``w`` to be the main-branch image of a point of C+."""
    if not (w.imag > 0 and math.isfinite(w.real) and math.isfinite(w.imag)):
        return False
    if k == INF:
        return w.imag < math.pi
    theta_max = math.pi / k if k * g > 0 else math.pi / (k + 1.0)
    return cmath.phase(1.0 + w / k) < theta_max * (1 + 1e-9)


_EPS = sys.float_info.epsilon


class _NewtonFailure(Exception):
    pass


def _newton(u: complex, w: complex, k: float, g: float, tol: float, max_iter: int = 60,
            check_upper: bool = True) -> complex:
    """Newton on ``f(w) = u`` (or on ``1/f = 1/u`` for ``|u| > 1``).

    The residual test is relative to ``|u|`` so that small arguments keep
    full relative accuracy.  Near a pole of ``f`` the residual cannot drop
    below ``|u| eps |f/f'|``, so a Newton step at rounding level also counts
    as convergence.
    """
    scale = max(abs(u), 1e-300)
    inverse_form = abs(u) > 1.0
    best = None
    prev_res = INF
    stall = 0
    settled = False
    for _ in range(max_iter):
        try:
            fw = _fs(w, k, g)
            fp = _fps(w, k, g)
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise _NewtonFailure(str(exc)) from exc
        res = abs(fw - u)
        if not math.isfinite(res):
            raise _NewtonFailure("non-finite residual")
        if best is None or res < best[0]:
            best = (res, w)
        if res <= tol * scale:
            break
        if res >= prev_res:
            stall += 1
            if stall >= 3:
                break
        prev_res = res
        if fp == 0:
            raise _NewtonFailure("vanishing derivative")
        step = (fw / fp) * (fw - u) / u if inverse_form else (fw - u) / fp
        w = w - step
        if abs(step) <= 8.0 * _EPS * abs(w):
            settled = True
            break
    res, w = best
    if not settled and res > max(tol, 1e-9) * scale:
        raise _NewtonFailure(f"residual {res:.3e} after Newton")
    if check_upper and u.imag > 0 and not _sector_ok(w, k, g):
        raise _NewtonFailure("left the main-branch region")
    return w


def _path(u: complex, r0: float) -> Callable[[float], complex]:
    """Continuation path from ``r0 * u/|u|``-like anchor to ``u`` inside C+ closure."""
    r = abs(u)
    phi = cmath.phase(u)
    lr0, lr = math.log(r0), math.log(r)
    if phi <= 0.75 * math.pi:
        def p(t):
            return cmath.rect(math.exp(lr0 + t * (lr - lr0)), phi)
        return p
    phi0 = 0.75 * math.pi

    def p(t):
        if t <= 0.5:
            return cmath.rect(math.exp(lr0 + 2 * t * (lr - lr0)), phi0)
        return cmath.rect(r, phi0 + (2 * t - 1) * (phi - phi0))
    return p


_ANCHOR = 1e-2


def _w_upper(u: complex, k: float, g: float, c3: float) -> complex:
    """Main branch at ``u`` with ``Im u >= 0``, ``u`` not in the closure of S."""
    on_axis = u.imag == 0
    if abs(u) <= _ANCHOR:
        seed = u + (g - 1.0) * u * u + c3 * u**3
        try:
            return _newton(u, seed, k, g, 1e-15, check_upper=not on_axis)
        except _NewtonFailure:
            pass
    r0 = min(_ANCHOR, abs(u))
    path = _path(u, r0)
    s = path(0.0)
    try:
        w = _newton(s, s + (g - 1.0) * s * s + c3 * s**3, k, g, 1e-13)
    except _NewtonFailure as exc:
        raise ConvergenceError("W anchor failed", {"z": u, "anchor": s}) from exc
    t, h = 0.0, 1.0 / 40.0
    history = []
    while t < 1.0:
        t_new = min(1.0, t + h)
        s_new = path(t_new)
        last = t_new == 1.0
        try:
            pred = w + (s_new - s) / _fps(w, k, g)
            w_new = _newton(s_new, pred, k, g, 1e-14 if last else 1e-11,
                            check_upper=not (last and on_axis))
        except (_NewtonFailure, ZeroDivisionError, OverflowError) as exc:
            history.append((t, h, str(exc)))
            h *= 0.5
            if h < 1e-10:
                raise ConvergenceError(
                    "W continuation failed", {"z": u, "t": t, "history": history[-10:]})
            continue
        t, s, w = t_new, s_new, w_new
        h = min(2.0 * h, 0.1)
    return w


def _w_scalar(u: complex, k: float, g: float, S: ForbiddenSet) -> complex:
    if u == 0:
        return 0j
    if not (math.isfinite(u.real) and math.isfinite(u.imag)):
        raise DomainError(f"non-finite argument {u}")
    if u.imag == 0 and S.in_closure(u.real):
        raise DomainError(f"z = {u.real!r} lies in the closure of the forbidden set "
                          f"{S.case} = ({S.lo!r}, {S.hi!r})")
    c3 = g * g - 3.0 * g + 1.5 + 0.5 * _inv(k)
    if u.imag < 0:
        return _w_upper(u.conjugate(), k, g, c3).conjugate()
    w = _w_upper(u, k, g, c3)
    if u.imag == 0:
        w = complex(w.real, 0.0)
    return w


def w_main(z, params: LTParams):
    """Main branch of the Lambert-Tsallis function ``W_{kappa,gamma}``.

    Newton continuation from the Taylor ball: the path runs along the ray
    through ``z`` from modulus ``1e-2`` (or, when ``arg z > 3 pi/4``, along
    the ray at angle ``3 pi/4`` and then an arc of radius ``|z|``) with
    adaptive step halving.  Points in the lower half-plane use the
    reflection ``W(conj z) = conj W(z)``, which therefore holds exactly, and
    real points are reached from the upper half-plane.  Negative ``kappa``
    goes through :func:`homographic_reduce`.

    Parameters
    ----------
    z : complex or array_like
        Point(s) outside the closure of the forbidden set.
    params : LTParams

    Returns
    -------
    complex or ndarray

    Raises
    ------
    DomainError
        If a point lies in the closure of ``S`` (endpoints included).
    ConvergenceError
        If the continuation cannot make progress.
    """
    arr, scalar = _as_complex(z)
    S = forbidden_set(params)
    k, g = params.reduced()
    flat = arr.ravel()
    out = np.empty_like(flat)
    for i, u in enumerate(flat):
        w = _w_scalar(complex(u), k, g, S)
        if params.kappa < 0:
            w = w / (1.0 + w / k)
        out[i] = w
    out = out.reshape(arr.shape)
    return _ret(out, scalar)


# ---------------------------------------------------------------------------
# Boundary curve and K_+-
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryPoint:
    """Conjugate pair of boundary preimages of a point of ``S``."""

    k_plus: complex
    k_minus: complex


class _BoundaryCurve:
    """Parametrization ``t in [0, 1] -> z(t)`` of the upper boundary arc of the
    main-branch region, in reduced coordinates (``kappa > 0``).

    ``z(0) = alpha2``; the curve ends at ``alpha1`` (bounded cases) or runs
    to infinity as ``t -> 1``.  ``Re f`` is monotone along it.
    """

    def __init__(self, k: float, g: float):
        self.k, self.g = k, g
        a1, a2 = _critical_raw(k, g)
        self.alpha1, self.alpha2 = a1, a2
        if k == INF:
            if g == 0:
                self.kind, self.bounded = "exp0", False
            else:
                self.kind, self.bounded = "expneg", True
                self.split = self._first_zero(self._disc_inf, math.pi)
        else:
            a = k * g
            if a < 0:
                self.kind, self.bounded = "neg", True
                self.split = self._first_zero(self._disc, math.pi / (k + 1.0))
            elif a == 0:
                self.kind, self.bounded = "zero", False
            else:
                self.kind = "pos"
                self.bounded = k == 1
        self.f_start = _critical_value(a2, k)
        self.f_end = _critical_value(a1, k) if self.bounded else -INF

    # -- auxiliary functions -------------------------------------------------
    def _b(self, theta):
        k = self.k
        return np.sin((k + 1.0) * theta) / np.sin(k * theta) - 2.0 * k * self.g * np.cos(theta)

    def _disc(self, theta):
        a = self.k * self.g
        return self._b(theta) ** 2 - 4.0 * a * (a - 1.0)

    def _disc_inf(self, y):
        g = self.g
        return 1.0 - 4.0 * g * (g * y * y + y / np.tan(y))

    @staticmethod
    def _first_zero(fn, upper: float, samples: int = 2048) -> float:
        grid = np.linspace(0.0, upper, samples + 1)[1:-1]
        vals = fn(grid)
        idx = np.nonzero(vals <= 0)[0]
        if idx.size == 0:
            raise ConvergenceError("boundary curve: no merge point found")
        j = idx[0]
        lo = grid[j - 1] if j > 0 else grid[0] * 1e-3
        return brentq(fn, lo, grid[j], xtol=1e-15, rtol=1e-15)

    # -- parametrization -----------------------------------------------------
    def _merge_map(self, t):
        """Angle-like parameter and its t-derivative for curves that fold back.

        The two branches meet at ``split`` with a square-root singularity in
        the angle; ``phi = split * s (2 - s)`` makes the curve smooth in t.
        """
        first = t <= 0.5
        s = np.where(first, 2 * t, 2 * (1 - t))
        phi = self.split * s * (2 - s)
        dphi = self.split * (2 - 2 * s) * np.where(first, 2.0, -2.0)
        return first, phi, dphi

    def point(self, t, tangent: bool = False):
        """Curve point ``z(t)``; with ``tangent=True`` also ``dz/dt``."""
        t = np.asarray(t, dtype=float)
        k, g = self.k, self.g
        with np.errstate(divide="ignore", invalid="ignore"):
            if k == INF:
                if self.kind == "exp0":
                    y, dy = t * math.pi, np.full_like(t, math.pi)
                    cot = 1.0 / np.tan(y)
                    x = np.where(y > 0, -y * cot, -1.0)
                    dx = np.where(y > 0, -cot + y / np.sin(y) ** 2, 0.0)
                else:
                    first, y, dy = self._merge_map(t)
                    cot = 1.0 / np.tan(y)
                    ycot = np.where(y > 0, y * cot, 1.0)
                    sq = np.sqrt(np.maximum(1.0 - 4.0 * g * (g * y * y + ycot), 0.0))
                    x = np.where(first, -1.0 - sq, -1.0 + sq) / (2 * g)
                    fy = np.where(y > 0, 2 * g * y + cot - y / np.sin(y) ** 2, 0.0)
                    dx = -fy / (1.0 + 2.0 * g * x)
                z = x + 1j * y
                dz = (dx + 1j) * dy
            else:
                a = k * g
                if self.kind == "neg":
                    first, theta, dth = self._merge_map(t)
                elif self.kind == "zero":
                    tmax = math.pi / (k + 1.0)
                    theta, dth = t * tmax, np.full_like(t, tmax)
                else:
                    tmax = math.pi / k
                    theta, dth = t * tmax, np.full_like(t, tmax)
                th = np.maximum(theta, 1e-300)
                skt, ck = np.sin(k * th), np.cos(k * th)
                sk1, ck1 = np.sin((k + 1.0) * th), np.cos((k + 1.0) * th)
                b = sk1 / skt - 2.0 * a * np.cos(th)
                db = ((k + 1.0) * ck1 * skt - k * sk1 * ck) / skt**2 + 2.0 * a * np.sin(th)
                if self.kind == "zero":
                    r = np.where(theta > 0, skt / sk1, k / (k + 1.0))
                    denom = b
                elif self.kind == "pos" and a == 1:
                    r = np.sin((k - 1.0) * th) / skt
                    denom = 2.0 * r + b
                else:
                    sq = np.sqrt(np.maximum(b * b - 4.0 * a * (a - 1.0), 0.0))
                    if self.kind == "neg":
                        r = np.where(first, -b - sq, -b + sq) / (2 * a)
                    else:
                        r = (sq - b) / (2 * a)
                    denom = 2.0 * a * r + b
                dr = -db * r / denom
                e = np.exp(1j * theta)
                z = k * (r * e - 1.0)
                dz = k * e * (dr + 1j * r) * dth
        z = np.where(t == 0, self.alpha2 + 0j, z)
        return (z, dz) if tangent else z

    def re_f(self, t) -> np.ndarray:
        z = self.point(t)
        with np.errstate(all="ignore"):
            if self.k == INF:
                e = np.exp(z)
            else:
                e = np.power(1.0 + z / self.k, self.k)
            return np.real(z * e / (1.0 + self.g * z))

    # -- inversion -----------------------------------------------------------
    def solve(self, x: np.ndarray) -> np.ndarray:
        """``K_+`` (reduced coordinates) for an array of ``x`` strictly inside S."""
        x = np.asarray(x, dtype=float)
        z = self.point(self.param_of(x))
        out = np.empty(x.shape, dtype=complex)
        for i, (zi, xi) in enumerate(zip(z.ravel(), x.ravel())):
            out.ravel()[i] = self._polish(complex(zi), float(xi))
        return out

    def param_of(self, x: np.ndarray) -> np.ndarray:
        """Curve parameter ``t`` with ``Re f(z(t)) = x`` (vectorized bisection)."""
        x = np.asarray(x, dtype=float)
        decreasing = self.f_end < self.f_start
        lo = np.zeros_like(x)
        hi = np.ones_like(x)
        if not self.bounded:
            # Move the upper bracket toward 1 until it passes x.
            hi = np.full_like(x, 0.5)
            for _ in range(60):
                val = self.re_f(hi)
                bad = (val > x) if decreasing else (val < x)
                bad &= hi < 1.0
                if not np.any(bad):
                    break
                hi = np.where(bad, 1.0 - 0.5 * (1.0 - hi) * 1e-2, hi)
            hi = np.minimum(hi, np.nextafter(1.0, 0.0))
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            val = self.re_f(mid)
            past = (val < x) if decreasing else (val > x)
            past = np.where(np.isnan(val), True, past)
            hi = np.where(past, mid, hi)
            lo = np.where(past, lo, mid)
        return 0.5 * (lo + hi)

    def _polish(self, z: complex, x: float) -> complex:
        k, g = self.k, self.g
        best, best_res = z, abs(_fs(z, k, g) - x)
        for _ in range(30):
            if best_res <= 4e-16 * (1 + abs(x)):
                break
            try:
                fz, fp = _fs(best, k, g), _fps(best, k, g)
                z_new = best - (fz - x) / fp
                res = abs(_fs(z_new, k, g) - x)
            except (ZeroDivisionError, OverflowError):
                break
            if not (z_new.imag > 0) or not res < best_res:
                break
            best, best_res = z_new, res
        return best


@functools.lru_cache(maxsize=64)
def _curve(k: float, g: float) -> _BoundaryCurve:
    return _BoundaryCurve(k, g)


def boundary_points(x, params: LTParams) -> np.ndarray:
    """Vectorized ``K_+(x)`` for ``x`` strictly inside the forbidden set.

    Raises
    ------
    DomainError
        If some ``x`` is not strictly inside ``S``.
    """
    x = np.asarray(x, dtype=float)
    S = forbidden_set(params)
    if not np.all(S.contains(x)):
        raise DomainError(f"boundary points need x inside S = ({S.lo}, {S.hi})")
    k, g = params.reduced()
    kp = _curve(k, g).solve(x)
    if params.kappa < 0:
        kp = kp / (1.0 + kp / k)
    return kp


def boundary_solutions(x: float, params: LTParams) -> BoundaryPoint:
    """The two conjugate solutions of ``f(z) = x`` on the boundary of the
    main-branch region, for ``x`` strictly inside ``S``.

    The upper boundary arc is traced in polar coordinates
    ``1 + z/kappa = r e^{i theta}``, where ``Im f = 0`` becomes the quadratic
    ``gamma kappa r^2 + b(theta) r + gamma kappa - 1 = 0`` with
    ``b(theta) = sin((kappa+1) theta)/sin(kappa theta) - 2 gamma kappa cos theta``
    (Cartesian ``x + gamma x^2 + gamma y^2 + y cot y = 0`` for
    ``kappa = inf``).  ``Re f`` is monotone along the arc; the crossing with
    ``x`` is bracketed by bisection and polished by Newton.  Negative
    ``kappa`` is traced on the homographically reduced pair.
    """
    kp = complex(boundary_points(np.array([x]), params)[0])
    return BoundaryPoint(kp, kp.conjugate())


def boundary_curve_samples(params: LTParams, t) -> np.ndarray:
    """Points of the upper boundary arc at curve parameters ``t in [0, 1)``
    (original coordinates)."""
    k, g = params.reduced()
    z = _curve(k, g).point(np.asarray(t, dtype=float))
    if params.kappa < 0:
        z = z / (1.0 + z / k)
    return z
