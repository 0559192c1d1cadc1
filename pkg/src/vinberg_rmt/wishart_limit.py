"""Limiting laws of quadratic Wishart ensembles on Vinberg cones.

For an ``n x N`` factor whose bipartite embedding has the trapezoidal
variance profile with parameters ``(p, alpha, v)`` the relevant
Lambert-Tsallis pair is ``kappa = 1/(1 - alpha)`` and ``gamma = (2p - 1)/p``.
The Stieltjes transform of the limit of ``Q/n`` is

    T(z) = (exp_kappa(W(-v/z)) - 1)/v = -1/v - 1/(z W(-v/z)) - gamma/z,

and its density is ``b / (pi x (a^2 + b^2))`` where ``a + ib = K_+(-v/x)``
is the upper boundary preimage of ``-v/x`` in the forbidden set.

All densities go through :func:`vinberg_rmt.lambert_tsallis.boundary_points`.
The Marchenko-Pastur and Dykema-Haagerup closed forms below serve as
independent oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lambert_tsallis as lt
from .errors import DomainError, ParameterError
from .lambert_tsallis import INF, LTParams
from .laws import Atom, DensityPiece, SpectralLaw, flat_end_piece, mixture_with_atom


# ---------------------------------------------------------------------------
# Parameter records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrapezoidProfile:
    """Trapezoidal variance profile: ``v`` on ``x < p, y >= p + alpha x`` (and its mirror)."""

    p: float
    alpha: float
    v: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ParameterError(f"p must lie in (0, 1), got {self.p}")
        qp = (1.0 - self.p) / self.p
        if not (0.0 <= self.alpha <= qp * (1 + 1e-12)):
            raise ParameterError(f"alpha must lie in [0, (1-p)/p] = [0, {qp}], got {self.alpha}")
        if not self.v > 0:
            raise ParameterError(f"v must be positive, got {self.v}")


def trapezoid_to_lt(profile: TrapezoidProfile) -> LTParams:
    """``(kappa, gamma) = (1/(1 - alpha), (2p - 1)/p)``; ``alpha = 1`` gives ``kappa = inf``."""
    kappa = INF if profile.alpha == 1.0 else 1.0 / (1.0 - profile.alpha)
    return LTParams(kappa, (2.0 * profile.p - 1.0) / profile.p)


@dataclass(frozen=True)
class GeneralVinbergParams:
    """Hub fraction ``c``, column multiplicities ``m1``, ``m2`` and variance ``v``."""

    c: float
    m1: float
    m2: float
    v: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.c <= 1.0):
            raise ParameterError(f"c must lie in (0, 1], got {self.c}")
        if self.m1 < 0 or self.m2 < 0 or self.m1 + self.m2 <= 0:
            raise ParameterError("need m1, m2 >= 0 and m1 + m2 >= 1")
        if not self.v > 0:
            raise ParameterError(f"v must be positive, got {self.v}")

    def lt_params(self) -> LTParams:
        """``kappa = 1/(1 - m1)``, ``gamma = 1 - (m1 + m2 (1 - c))/c``."""
        kappa = INF if self.m1 == 1 else 1.0 / (1.0 - self.m1)
        gamma = 1.0 - (self.m1 + self.m2 * (1.0 - self.c)) / self.c
        try:
            return LTParams(kappa, gamma)
        except ParameterError as exc:
            raise ParameterError(
                f"derived (kappa, gamma) = ({lt.format_kappa(kappa)}, {gamma}) is inadmissible: "
                "need gamma < 1 and gamma <= 1/kappa <= 1") from exc

    @property
    def p_prime(self) -> float:
        """Limit of ``n/(n + N)`` for the bipartite embedding."""
        return 1.0 / (1.0 + self.m1 + self.m2 * (1.0 - self.c))


def symmetric_cone_lt(m1: float, m: float) -> LTParams:
    """Pair for the full symmetric cone with ``m2 ~ m n``: ``(1/(1 - m1), 1 - m - m1)``."""
    kappa = INF if m1 == 1 else 1.0 / (1.0 - m1)
    return LTParams(kappa, 1.0 - m - m1)


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def _upper(z) -> tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=complex)
    if np.any(arr.imag <= 0):
        raise DomainError("the transform is evaluated on Im z > 0 only")
    return arr, arr.ndim == 0


def _off_spectrum(z) -> tuple[np.ndarray, bool]:
    """Accept ``Im z > 0`` and the negative real half-line (outside the spectrum of ``Q``)."""
    arr = np.asarray(z, dtype=complex)
    ok = (arr.imag > 0) | ((arr.imag == 0) & (arr.real < 0))
    if not np.all(ok):
        raise DomainError("the transform is evaluated on Im z > 0 or z < 0 only")
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return complex(arr) if scalar else arr


def stieltjes_T(z, params: LTParams, v: float = 1.0, form: str = "exp"):
    """Stieltjes transform of the limit of ``Q/n``.

    Parameters
    ----------
    z : complex or array_like
        Points with ``Im z > 0`` or on the negative real half-line.
    params : LTParams
    v : float
        Entry variance.
    form : {"exp", "log"}
        ``"exp"`` evaluates ``(exp_kappa(W(-v/z)) - 1)/v``; ``"log"``
        evaluates ``-1/v - 1/(z W(-v/z)) - gamma/z``.  The two agree.
    """
    arr, scalar = _off_spectrum(z)
    w = np.asarray(lt.w_main(-v / arr, params), dtype=complex)
    if form == "log":
        out = -1.0 / v - 1.0 / (arr * w) - params.gamma / arr
    elif form == "exp":
        if params.kappa < 0:
            # exp_kappa(w) equals exp_kappa'(w') on the reduced side, where the
            # principal power is unambiguous.
            kp, _ = params.reduced()
            wp = w / (1.0 + w / params.kappa)
            e = lt.exp_kappa(wp, kp)
        else:
            e = lt.exp_kappa(w, params.kappa)
        out = (np.asarray(e) - 1.0) / v
    else:
        raise ValueError(f"unknown form {form!r}")
    out = np.where(arr.imag == 0, out.real + 0j, out)
    return _ret(out, scalar)


def stieltjes_S(z, profile: TrapezoidProfile):
    """Stieltjes transform of the bipartite embedding with a trapezoid profile.

    ``S(z) = -2p/(z W(-v p/z^2)) + (1 - 2p)/z - 2z/v``.
    """
    arr, scalar = _upper(z)
    params = trapezoid_to_lt(profile)
    p, v = profile.p, profile.v
    w = np.asarray(lt.w_main(-v * p / arr**2, params), dtype=complex)
    out = -2.0 * p / (arr * w) + (1.0 - 2.0 * p) / arr - 2.0 * arr / v
    return _ret(out, scalar)


def r_transform(z, params: LTParams, v: float = 1.0):
    """R-transform ``-1/z - v gamma/(1 - vz) - v/((1 - vz) ln_{1/kappa}(1 - vz))``.

    The singularity at ``z = 0`` is removable; there the mean ``R(0)`` is
    returned, computed from the series ``ln_q(1 - u) = -u - (1 - q) u^2/2 + O(u^3)``.

    Raises
    ------
    BranchCutError
        If ``1 - vz`` lies on the cut of the Tsallis logarithm.
    """
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    q = params.inv_kappa
    one = 1.0 - v * arr
    zero = arr == 0
    safe = np.where(zero, 0.5, arr)
    safe_one = np.where(zero, 1.0 - 0.5 * v, one)
    ln = np.asarray(lt.ln_kappa(safe_one, q), dtype=complex)
    out = -1.0 / safe - v * params.gamma / safe_one - v / (safe_one * ln)
    mean = v * (1.0 - params.gamma) - v * (1.0 - q) / 2.0
    out = np.where(zero, mean, out)
    return _ret(out, scalar)


def bipartite_relation_check(z, p: float, S_value, T_fn) -> float:
    """Residual ``|T(z^2/p) - (1/(2z)) ((1 - 2p)/z + S(z))|``."""
    z = complex(z)
    return abs(T_fn(z * z / p) - ((1.0 - 2.0 * p) / z + S_value) / (2.0 * z))


def general_vinberg_T(z, gparams: GeneralVinbergParams):
    """Transform for a general cone: ``T_{kappa,gamma}(z/c) - (1 - c)/z``."""
    arr, scalar = _off_spectrum(z)
    params = gparams.lt_params()
    c = gparams.c
    out = np.asarray(stieltjes_T(arr / c, params, gparams.v)) - (1.0 - c) / arr
    return _ret(out, scalar)


# ---------------------------------------------------------------------------
# Density, support and law
# ---------------------------------------------------------------------------

def wishart_density(x, params: LTParams, v: float = 1.0):
    """Density ``b/(pi x (a^2 + b^2))`` with ``a + ib = K_+(-v/x)``.

    Returns 0 for ``x <= 0`` and wherever ``-v/x`` is outside the forbidden
    set.  The behaviour at 0 is reported by :func:`wishart_law` metadata.
    """
    arr = np.asarray(x, dtype=float)
    out = np.zeros(arr.shape)
    S = lt.forbidden_set(params)
    pos = arr > 0
    u = np.full(arr.shape, np.nan)
    u[pos] = -v / arr[pos]
    inside = pos & S.contains(np.nan_to_num(u, nan=0.0))
    if np.any(inside):
        K = lt.boundary_points(u[inside], params)
        out[inside] = K.imag / (math.pi * arr[inside] * np.abs(K) ** 2)
    return float(out) if arr.ndim == 0 else out


def wishart_case(params: LTParams) -> int:
    """Case label 1, 2 or 3 of the support classification."""
    kappa, gamma = params.kappa, params.gamma
    if kappa < 0:
        gp = gamma - 1.0 / kappa
        return 2 if gp == 0 else 1
    if gamma < 0:
        return 1
    return 2 if gamma == 0 else 3


def wishart_support(params: LTParams, v: float = 1.0) -> tuple[tuple[float, float], ...]:
    """Support intervals; ``(0, 0)`` marks an isolated atom at 0."""
    S = lt.forbidden_set(params)
    right = -v / S.hi
    if S.lo == -INF:
        return ((0.0, right),)
    left = -v / S.lo
    if wishart_case(params) == 3:
        return ((0.0, 0.0), (left, right))
    return ((left, right),)


def _log_derivative(z, k: float, g: float):
    poly = g * z * z + (1.0 + lt._inv(k)) * z + 1.0
    if k == INF:
        return poly / (z * (1.0 + g * z))
    return poly / (z * (1.0 + g * z) * (1.0 + z / k))


def _curve_piece(params: LTParams, v: float) -> DensityPiece:
    """Quadrature piece parametrized by the boundary-curve parameter.

    Along the curve ``u = f(z(t))`` is real and ``x = -v/u``; the density
    mass element is ``-Im(1/z) |d log u| / pi``, which is smooth in ``t``
    even where the density itself blows up at ``x = 0``.
    """
    k, g = params.reduced()
    curve = lt._curve(k, g)

    def to_x(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            u = curve.re_f(np.minimum(t, 1.0))
        u = np.where(t <= 0, curve.f_start, np.where(t >= 1, curve.f_end, u))
        return -v / u

    def weight(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            z, dz = curve.point(t, tangent=True)
            dlog = np.real(_log_derivative(z, k, g) * dz)
            return np.nan_to_num(-np.imag(1.0 / z) * np.abs(dlog) / math.pi)

    def to_param(x):
        x = np.asarray(x, dtype=float)
        return curve.param_of(-v / x)

    return DensityPiece(to_x, weight, to_param)


def wishart_law(params: LTParams, v: float = 1.0) -> SpectralLaw:
    """Limiting law of ``Q/n`` for the pair ``(kappa, gamma)`` and variance ``v``.

    Case 1 (``gamma < 0``, or ``kappa < 0`` with ``gamma' < 0``): compact
    support inside ``(0, inf)`` and no atom.  Case 2 (``gamma = 0`` or
    ``gamma' = 0``): support ``[0, -v/f(alpha_2)]`` with a density that blows
    up at 0.  Case 3 (``0 < gamma < 1``): an atom of mass ``gamma`` at 0.
    The boundary ``kappa = 1/gamma`` is treated as case 3.
    """
    case = wishart_case(params)
    atoms = (Atom(0.0, params.gamma),) if case == 3 else ()
    zero = {1: "finite", 2: "infinite", 3: "atom"}[case]

    def density(x):
        return wishart_density(x, params, v)

    meta = {"law": "wishart", "kappa": params.kappa, "gamma": params.gamma, "v": v,
            "case": case, "forbidden_set": lt.forbidden_set(params).case}
    return SpectralLaw(f"wishart(kappa={lt.format_kappa(params.kappa)}, gamma={params.gamma:g})",
                       atoms, wishart_support(params, v), density, (_curve_piece(params, v),),
                       zero, meta)


def general_vinberg_law(gparams: GeneralVinbergParams) -> SpectralLaw:
    """Law with transform :func:`general_vinberg_T`.

    It is ``c`` times the ``(kappa, gamma)`` law dilated by ``c`` plus an
    atom ``1 - c`` at 0.
    """
    base = wishart_law(gparams.lt_params(), gparams.v)
    c = gparams.c
    meta = dict(base.params)
    meta.update({"law": "general_vinberg", "c": c, "m1": gparams.m1, "m2": gparams.m2})
    return mixture_with_atom(base, c, c, 1.0 - c, f"general_vinberg(c={c:g})", meta)


# ---------------------------------------------------------------------------
# Parametric density curves
# ---------------------------------------------------------------------------

def dh_density_curve(x_param_grid) -> np.ndarray:
    """Dykema-Haagerup density as a parametric curve (``v = 1``).

    For ``x`` in ``[0, pi)`` the pair is
    ``((sin x / x) exp(x cot x), sin(x) exp(-x cot x) / pi)``; ``x = 0`` gives
    ``(e, 0)``.

    Returns
    -------
    ndarray, shape (n, 2)
        Abscissae and densities.
    """
    x = np.asarray(x_param_grid, dtype=float)
    if np.any((x < 0) | (x >= math.pi)):
        raise DomainError("the parametric grid must lie in [0, pi)")
    with np.errstate(divide="ignore", invalid="ignore"):
        xcot = np.where(x > 0, x / np.tan(x), 1.0)
        sinc = np.where(x > 0, np.sin(x) / x, 1.0)
    absc = sinc * np.exp(xcot)
    dens = np.sin(x) * np.exp(-xcot) / math.pi
    return np.column_stack([absc, dens])


def parametric_density_curve(params: LTParams, t, v: float = 1.0) -> np.ndarray:
    """Implicit density form sampled along the boundary curve.

    With ``z = a + ib`` on the upper boundary arc, ``e = |exp_kappa(z)|`` and
    ``theta = kappa Arg(1 + z/kappa)`` (``Im z`` for ``kappa = inf``) the
    point ``(sin(theta)/b (1 + gamma a - gamma b cot theta) / e, e sin(theta)/pi)``
    lies on the graph of the ``v = 1`` density; the result is rescaled to ``v``.
    """
    z = lt.boundary_curve_samples(params, t)
    a, b = z.real, z.imag
    kappa, gamma = params.kappa, params.gamma
    if kappa == INF:
        e, theta = np.exp(a), b
    else:
        base = 1.0 + z / kappa
        e = np.abs(base) ** kappa
        theta = kappa * np.angle(base)
    absc = np.sin(theta) / b * (1.0 + gamma * a - gamma * b / np.tan(theta)) / e
    dens = e * np.sin(theta) / math.pi
    return np.column_stack([v * absc, dens / v])


# ---------------------------------------------------------------------------
# Marchenko-Pastur oracle
# ---------------------------------------------------------------------------

def _mp_edges(C: float, v: float) -> tuple[float, float]:
    s = math.sqrt(C)
    return v * (s - 1.0) ** 2, v * (s + 1.0) ** 2


def marchenko_pastur(t, C: float, v: float = 1.0):
    """Marchenko-Pastur density ``sqrt((t - a)(b - t)) / (2 pi v t)``.

    ``[a, b] = v [(sqrt C - 1)^2, (sqrt C + 1)^2]``; the atom ``[1 - C]_+``
    at 0 is not part of the density.
    """
    if not C > 0:
        raise ParameterError(f"C must be positive, got {C}")
    arr = np.asarray(t, dtype=float)
    lo, hi = _mp_edges(C, v)
    out = np.zeros(arr.shape)
    inside = (arr > max(lo, 0.0)) & (arr < hi)
    ti = arr[inside]
    out[inside] = np.sqrt((ti - lo) * (hi - ti)) / (2.0 * math.pi * v * ti)
    return float(out) if arr.ndim == 0 else out


def mp_stieltjes(z, C: float, v: float = 1.0):
    """Closed-form Marchenko-Pastur Stieltjes transform on ``Im z > 0``."""
    arr, scalar = _upper(z)
    lo, hi = _mp_edges(C, v)
    root = np.sqrt(arr - lo) * np.sqrt(arr - hi)
    out = (v * (C - 1.0) - arr + root) / (2.0 * v * arr)
    return _ret(out, scalar)


def mp_law(C: float, v: float = 1.0) -> SpectralLaw:
    """Marchenko-Pastur law with ratio ``C`` and scale ``v``."""
    if not C > 0:
        raise ParameterError(f"C must be positive, got {C}")
    lo, hi = _mp_edges(C, v)
    atom = max(1.0 - C, 0.0)
    atoms = (Atom(0.0, atom),) if atom > 0 else ()

    def density(t):
        return marchenko_pastur(t, C, v)

    support = ((lo, hi),) if atom == 0 else ((0.0, 0.0), (lo, hi))
    zero = "atom" if atom > 0 else ("infinite" if C == 1 else "finite")
    return SpectralLaw(f"mp(C={C:g}, v={v:g})", atoms, support, density,
                       (flat_end_piece(lo, hi, density),), zero,
                       {"law": "mp", "C": C, "v": v})
