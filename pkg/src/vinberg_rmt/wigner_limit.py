"""Limiting eigenvalue law of rescaled Wigner matrices with a daisy zero pattern.

With hub fraction ``c = lim a_n / n`` and entry variance ``v`` the law of
``U_n / sqrt(n)`` is ``f_c(t) dt + [1 - 2c]_+ delta_0``.  Its Stieltjes
transform ``A = S(z)`` is the root of

    v^2 z A^3 + (2 v z^2 + (1 - 2c) v^2) A^2 + (z^2 + 2v(1 - c)) z A + z^2 - c^2 v = 0

selected by the Herglotz property.  Writing ``B = -c/(z + vA)`` (the hub
share of the transform) the pair satisfies ``A - B = (c - 1)/(z + vB)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .laws import Atom, SpectralLaw, flat_end_piece


@dataclass(frozen=True)
class WignerLawParams:
    """Hub fraction ``c`` in ``[0, 1]`` and variance ``v > 0``."""

    c: float
    v: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.c <= 1.0):
            raise DomainError(f"hub fraction c must lie in [0, 1], got {self.c}")
        if not self.v > 0:
            raise DomainError(f"variance v must be positive, got {self.v}")


def edge_points(c: float) -> tuple[float, float]:
    """Edge parameters ``(alpha_c, beta_c)`` of the squared support.

    ``alpha_c, beta_c = (8 + 4c - 13c^2 -+ sqrt(c (8 - 7c)^3)) / (8 (1 - c))``;
    ``c = 1`` returns the limits ``(-inf, 4)``.

    Raises
    ------
    DomainError
        If ``c`` lies outside ``[0, 1]``.
    """
    if not (0.0 <= c <= 1.0):
        raise DomainError(f"c must lie in [0, 1], got {c}")
    if c == 1.0:
        return -math.inf, 4.0
    base = 8.0 + 4.0 * c - 13.0 * c * c
    root = math.sqrt(c * (8.0 - 7.0 * c) ** 3)
    den = 8.0 * (1.0 - c)
    beta = (base + root) / den
    # base^2 - root^2 = 64 (c - 1)(2c - 1)^3, so alpha = 8 (1 - 2c)^3 / (base + root)
    # has no cancellation near c = 0 or c = 1/2 and its sign is exact.
    alpha = 8.0 * (1.0 - 2.0 * c) ** 3 / (base + root)
    return alpha, beta


def _cbrt(x):
    return np.cbrt(x)


def wigner_density(t, params: WignerLawParams):
    """Density ``f_c(t)`` of the absolutely continuous part.

    Evaluated by the difference of real cube roots of ``R_+`` and ``R_-``
    at ``x = t/sqrt(v)``.  At ``t = 0`` the limit ``c / (pi sqrt(v (2c - 1)))``
    is returned for ``c > 1/2``, ``inf`` for ``c = 1/2`` and ``0`` for
    ``c < 1/2``.  ``c = 1`` is the semicircle law and ``c = 0`` has no
    density.
    """
    arr = np.asarray(t, dtype=float)
    c, v = params.c, params.v
    x = np.abs(arr) / math.sqrt(v)
    out = np.zeros(arr.shape)
    if c == 0.0:
        pass
    elif c == 1.0:
        inside = x <= 2.0
        out[inside] = np.sqrt(4.0 - x[inside] ** 2) / (2.0 * math.pi * math.sqrt(v))
    else:
        alpha, beta = edge_points(c)
        x2 = x * x
        inside = (x2 <= beta) & (x2 >= max(alpha, 0.0)) & (x > 0)
        xi, x2i = x[inside], x2[inside]
        rad = (x2i - alpha) * (beta - x2i)
        rad = np.where(rad >= -1e-12, np.maximum(rad, 0.0), np.nan)
        poly = (x2i**3 - 3.0 * (c + 1.0) * x2i**2
                + 1.5 * (5.0 * c * c - 2.0 * c + 2.0) * x2i + (2.0 * c - 1.0) ** 3)
        shift = 3.0 * c * math.sqrt(3.0 - 3.0 * c) * xi * np.sqrt(rad)
        num = _cbrt(poly + shift) - _cbrt(poly - shift)
        out[inside] = np.nan_to_num(num / (2.0 * math.sqrt(3.0) * math.pi * xi * math.sqrt(v)))
        # Near t = 0 (c > 1/2) the cube-root difference cancels; use the limit.  The
        # density varies on the scale sqrt(-alpha), which shrinks to 0 as c -> 1/2.
        small = x < 1e-6 * math.sqrt(abs(alpha))
        if c > 0.5 and np.any(small):
            out[small] = c / (math.pi * math.sqrt(v * (2.0 * c - 1.0)))
        elif c == 0.5:
            out[x == 0] = math.inf
    out = np.maximum(out, 0.0)
    return float(out) if arr.ndim == 0 else out


def wigner_support(params: WignerLawParams) -> tuple[tuple[float, float], ...]:
    """Closed support intervals (``(0, 0)`` stands for the isolated atom)."""
    c, v = params.c, params.v
    if c == 0.0:
        return ((0.0, 0.0),)
    alpha, beta = edge_points(c)
    right = math.sqrt(v * beta)
    if c < 0.5:
        left = math.sqrt(v * alpha)
        return ((-right, -left), (0.0, 0.0), (left, right))
    return ((-right, right),)


def wigner_law(params: WignerLawParams) -> SpectralLaw:
    """Limiting law: atom ``[1 - 2c]_+`` at 0, density ``f_c`` and support."""
    c, v = params.c, params.v
    atom = max(1.0 - 2.0 * c, 0.0)
    atoms = (Atom(0.0, atom),) if atom > 0 else ()
    support = wigner_support(params)

    def density(t):
        return wigner_density(t, params)

    if c == 0.0:
        pieces = ()
    elif c < 0.5:
        (a0, a1), _, (b0, b1) = support
        pieces = (flat_end_piece(a0, a1, density), flat_end_piece(b0, b1, density))
    else:
        r = support[0][1]
        pieces = (flat_end_piece(-r, 0.0, density), flat_end_piece(0.0, r, density))
    if c < 0.5:
        zero = "atom"
    elif c == 0.5:
        zero = "infinite"
    else:
        zero = "finite"
    return SpectralLaw(f"wigner(c={c:g}, v={v:g})", atoms, support, density, pieces, zero,
                       {"law": "wigner", "c": c, "v": v})


# ---------------------------------------------------------------------------
# Stieltjes transform
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CubicCoefficients:
    """Depressed form ``Y^3 + p Y + q`` of the rescaled monic cubic.

    ``disc = -(4 p^3 + 27 q^2)``.
    """

    p_of_z: complex
    q_of_z: complex
    disc: complex


def cubic_coefficients(z: complex, params: WignerLawParams) -> CubicCoefficients:
    """Coefficients of the cubic in the rescaled variables ``z/sqrt(v)``."""
    c = params.c
    zv = complex(z) / math.sqrt(params.v)
    a2 = (2.0 * zv * zv + 1.0 - 2.0 * c) / zv
    a1 = zv * zv + 2.0 - 2.0 * c
    a0 = (zv * zv - c * c) / zv
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2**3 / 27.0 - a2 * a1 / 3.0 + a0
    return CubicCoefficients(p, q, -(4.0 * p**3 + 27.0 * q * q))


def cubic_residual(A, z, params: WignerLawParams):
    """Unscaled cubic residual at ``A``."""
    c, v = params.c, params.v
    z = np.asarray(z, dtype=complex)
    return (v * v * z * A**3 + (2.0 * v * z * z + (1.0 - 2.0 * c) * v * v) * A**2
            + (z * z + 2.0 * v * (1.0 - c)) * z * A + z * z - c * c * v)


def system_residual(A, z, params: WignerLawParams):
    """Residual of ``A - B = (c - 1)/(z + v B)`` with ``B = -c/(z + v A)``."""
    c, v = params.c, params.v
    B = -c / (z + v * A)
    return A - B - (c - 1.0) / (z + v * B)


def _roots_batch(z: np.ndarray, c: float) -> np.ndarray:
    """All three roots of the rescaled cubic for each ``z`` (shape ``(n, 3)``)."""
    a2 = (2.0 * z * z + 1.0 - 2.0 * c) / z
    a1 = z * z + 2.0 - 2.0 * c
    a0 = (z * z - c * c) / z
    comp = np.zeros(z.shape + (3, 3), dtype=complex)
    comp[..., 0, :] = -np.stack([a2, a1, a0], axis=-1)
    comp[..., 1, 0] = 1.0
    comp[..., 2, 1] = 1.0
    roots = np.linalg.eigvals(comp)
    for _ in range(3):
        val = ((roots + a2[..., None]) * roots + a1[..., None]) * roots + a0[..., None]
        der = (3.0 * roots + 2.0 * a2[..., None]) * roots + a1[..., None]
        step = np.where(der != 0, val / np.where(der == 0, 1, der), 0)
        roots = roots - step
    return roots


def _score(roots: np.ndarray, z: np.ndarray, c: float) -> np.ndarray:
    """Smallest imaginary part among ``A``, ``B`` and ``A - B`` (Herglotz test)."""
    B = -c / (z[..., None] + roots)
    return np.minimum(np.minimum(roots.imag, B.imag), (roots - B).imag)


def _track(zv: complex, c: float) -> complex:
    """Continuation from far up the imaginary direction (ambiguity fallback)."""
    top = complex(zv.real, max(10.0 * abs(zv), 10.0))
    path = top + (zv - top) * np.linspace(0.0, 1.0, 400)
    roots = _roots_batch(path, c)
    A = -1.0 / path[0]
    for k in range(len(path)):
        A = roots[k][np.argmin(np.abs(roots[k] - A))]
    return complex(A)


def wigner_stieltjes(z, params: WignerLawParams):
    """Stieltjes transform ``S(z) = int mu(dt) / (t - z)`` for ``Im z > 0``.

    The cubic is solved as a companion-matrix eigenproblem and the roots are
    polished by Newton.  The physical root is the one for which ``A``,
    ``B = -c/(z + vA)`` and ``A - B`` all have positive imaginary part; if
    no root passes that test it is tracked by continuity from a point far up
    the imaginary direction.  ``c = 0`` gives ``-1/z`` and ``c = 1`` the
    semicircle transform.

    Raises
    ------
    DomainError
        If some ``Im z <= 0``.
    """
    arr = np.asarray(z, dtype=complex)
    if np.any(arr.imag <= 0):
        raise DomainError("wigner_stieltjes needs Im z > 0")
    c, v = params.c, params.v
    sv = math.sqrt(v)
    if c == 0.0:
        out = -1.0 / arr
    elif c == 1.0:
        zv = arr / sv
        root = np.sqrt(zv - 2.0) * np.sqrt(zv + 2.0)
        out = (-zv + root) / 2.0 / sv
    else:
        zv = arr.ravel() / sv
        roots = _roots_batch(zv, c)
        score = _score(roots, zv, c)
        best = np.argmax(score, axis=1)
        A = roots[np.arange(len(zv)), best]
        bad = score[np.arange(len(zv)), best] <= 0
        for i in np.nonzero(bad)[0]:
            A[i] = _track(complex(zv[i]), c)
        out = (A / sv).reshape(arr.shape)
    return complex(out) if arr.ndim == 0 else out
