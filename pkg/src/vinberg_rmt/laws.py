"""Limiting spectral laws: atoms, a density, support intervals and a CDF.

A law's absolutely continuous part is described by one or more
:class:`DensityPiece` objects.  Each piece is a monotone map ``s -> x(s)``
from ``[0, 1]`` onto a support interval together with the weight
``density(x(s)) * |x'(s)|``.  Pieces are chosen so that the weight is smooth
in ``s`` even when the density has square-root edges or integrable
singularities, which makes plain composite Gauss-Legendre quadrature
accurate for masses and CDF values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping

import numpy as np
from scipy import special

_GL_ORDER = 12
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)
_PANELS = 256


@dataclass(frozen=True)
class Atom:
    """Point mass ``mass`` at ``loc``."""

    loc: float
    mass: float


@dataclass(frozen=True)
class DensityPiece:
    """One monotone parametrization of a support interval.

    Attributes
    ----------
    to_x : callable
        ``s -> x`` for ``s`` in ``[0, 1]`` (vectorized, monotone).
    weight : callable
        ``s -> density(x(s)) * |dx/ds|`` (vectorized, non-negative).
    to_param : callable
        Inverse of ``to_x`` on ``[min x, max x]``.
    """

    to_x: Callable[[np.ndarray], np.ndarray]
    weight: Callable[[np.ndarray], np.ndarray]
    to_param: Callable[[np.ndarray], np.ndarray]

    @cached_property
    def ends(self) -> tuple[float, float]:
        x0, x1 = (float(v) for v in self.to_x(np.array([0.0, 1.0])))
        return x0, x1

    @property
    def lo(self) -> float:
        return min(self.ends)

    @property
    def hi(self) -> float:
        return max(self.ends)

    @property
    def increasing(self) -> bool:
        x0, x1 = self.ends
        return x1 >= x0

    @cached_property
    def table(self) -> tuple[np.ndarray, np.ndarray]:
        """Panel edges in ``s`` and the cumulative mass at each edge."""
        edges = np.linspace(0.0, 1.0, _PANELS + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        w = np.nan_to_num(self.weight(nodes.ravel()).reshape(nodes.shape), nan=0.0)
        panel = (w * _GL_WEIGHTS[None, :]).sum(axis=1) * half
        return edges, np.concatenate([[0.0], np.cumsum(panel)])

    @property
    def mass(self) -> float:
        return float(self.table[1][-1])

    def mass_below_param(self, s: np.ndarray) -> np.ndarray:
        """Mass carried by parameters in ``[0, s]``."""
        s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
        edges, cum = self.table
        j = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, _PANELS - 1)
        left = edges[j]
        half = 0.5 * (s - left)
        nodes = (left + half)[..., None] + half[..., None] * _GL_NODES
        w = np.nan_to_num(self.weight(nodes.ravel()).reshape(nodes.shape), nan=0.0)
        return cum[j] + (w * _GL_WEIGHTS).sum(axis=-1) * half

    def mass_below(self, x: np.ndarray) -> np.ndarray:
        """Mass of this piece on ``(-inf, x]``."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        inside = (x > self.lo) & (x < self.hi)
        out[x >= self.hi] = self.mass
        if np.any(inside):
            s = self.to_param(x[inside])
            m = self.mass_below_param(s)
            out[inside] = m if self.increasing else self.mass - m
        return out


def flat_end_piece(lo: float, hi: float, density: Callable, order: float = 4.0) -> DensityPiece:
    """Piece for ``[lo, hi]`` with ``x = lo + (hi - lo) I_s(order, order)``.

    ``I_s`` is the regularized incomplete beta function, so ``dx/ds`` vanishes
    like ``s^(order-1)`` at both ends.  Square-root edges and integrable
    power singularities at an end (including the fractional corrections that
    cube roots produce) then give a weight that is smooth to high order.
    """
    width = hi - lo
    norm = special.beta(order, order)

    def to_x(s):
        return lo + width * special.betainc(order, order, np.asarray(s, dtype=float))

    def weight(s):
        s = np.asarray(s, dtype=float)
        jac = width * (s * (1.0 - s)) ** (order - 1.0) / norm
        with np.errstate(invalid="ignore"):
            return np.where(jac > 0, density(to_x(s)) * jac, 0.0)

    def to_param(x):
        u = np.clip((np.asarray(x, dtype=float) - lo) / width, 0.0, 1.0)
        return special.betaincinv(order, order, u)

    return DensityPiece(to_x, weight, to_param)


@dataclass(frozen=True)
class SpectralLaw:
    """Probability measure on the real line: atoms plus a density.

    Attributes
    ----------
    name : str
        Short label used in reports.
    atoms : tuple of Atom
    support : tuple of (float, float)
        Closed disjoint intervals, sorted; an atom outside the density
        support appears as a degenerate interval ``(x, x)``.
    density_fn : callable
        Vectorized density, zero outside the support.
    pieces : tuple of DensityPiece
        Quadrature parametrizations of the density support.
    zero_behavior : str
        Behaviour at ``x = 0``: ``"finite"``, ``"infinite"`` or ``"atom"``.
    params : mapping
        Parameters echoed into JSON reports.
    """

    name: str
    atoms: tuple[Atom, ...]
    support: tuple[tuple[float, float], ...]
    density_fn: Callable = field(repr=False, compare=False)
    pieces: tuple[DensityPiece, ...] = field(repr=False, compare=False, default=())
    zero_behavior: str = "finite"
    params: Mapping = field(default_factory=dict, compare=False)

    def density(self, x):
        """Density at ``x`` (scalar or array)."""
        arr = np.asarray(x, dtype=float)
        out = np.asarray(self.density_fn(arr), dtype=float)
        return float(out) if arr.ndim == 0 else out

    @property
    def atom_mass(self) -> float:
        return float(sum(a.mass for a in self.atoms))

    def density_mass(self) -> float:
        """Gauss-Legendre integral of the density over its support."""
        return float(sum(p.mass for p in self.pieces))

    def total_mass(self) -> float:
        return self.atom_mass + self.density_mass()

    @property
    def support_hull(self) -> tuple[float, float]:
        return self.support[0][0], self.support[-1][1]

    def cdf(self, x):
        """Right-continuous CDF ``mu((-inf, x])``."""
        arr = np.asarray(x, dtype=float)
        out = np.zeros(arr.shape)
        for a in self.atoms:
            out += a.mass * (arr >= a.loc)
        for p in self.pieces:
            out += p.mass_below(arr)
        return float(out) if arr.ndim == 0 else out

    def bin_masses(self, edges) -> np.ndarray:
        """Masses of ``[e_0, e_1), ..., [e_{m-1}, e_m]`` (last bin closed)."""
        edges = np.asarray(edges, dtype=float)
        cont = np.zeros(edges.shape)
        for p in self.pieces:
            cont += p.mass_below(edges)
        masses = np.diff(cont)
        for a in self.atoms:
            if edges[0] <= a.loc <= edges[-1]:
                j = min(int(np.searchsorted(edges, a.loc, side="right")) - 1, len(edges) - 2)
                masses[j] += a.mass
        return masses

    def quantiles(self, n: int) -> np.ndarray:
        """Midpoint quantiles ``F^{-1}((i + 1/2)/n)`` by bisection on the CDF."""
        probs = (np.arange(n) + 0.5) / n
        lo_x, hi_x = self.support_hull
        lo = np.full(n, lo_x - 1e-12)
        hi = np.full(n, hi_x + 1e-12)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            above = self.cdf(mid) >= probs
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
        return hi

    def to_dict(self) -> dict:
        """JSON-ready description (atoms, support, parameters)."""
        return {
            "name": self.name,
            "atoms": [{"loc": a.loc, "mass": a.mass} for a in self.atoms],
            "support": [[lo, hi] for lo, hi in self.support],
            "zero_behavior": self.zero_behavior,
            **{k: _jsonable(v) for k, v in self.params.items()},
        }


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def mixture_with_atom(law: SpectralLaw, weight: float, scale: float, atom_mass: float,
                      name: str, params: Mapping) -> SpectralLaw:
    """``weight * (law pushed forward by x -> scale x) + atom_mass * delta_0``."""
    def density(x):
        return weight * np.asarray(law.density_fn(np.asarray(x, dtype=float) / scale)) / scale

    pieces = tuple(
        DensityPiece(
            to_x=(lambda s, p=p: scale * p.to_x(s)),
            weight=(lambda s, p=p: weight * p.weight(s) * 1.0),
            to_param=(lambda x, p=p: p.to_param(np.asarray(x, dtype=float) / scale)),
        )
        for p in law.pieces
    )
    atoms = {}
    for a in law.atoms:
        atoms[scale * a.loc] = atoms.get(scale * a.loc, 0.0) + weight * a.mass
    if atom_mass > 0:
        atoms[0.0] = atoms.get(0.0, 0.0) + atom_mass
    atom_list = tuple(Atom(loc, m) for loc, m in sorted(atoms.items()) if m > 0)
    support = [(scale * lo, scale * hi) for lo, hi in law.support]
    if atom_mass > 0 and not any(lo <= 0.0 <= hi for lo, hi in support):
        support.append((0.0, 0.0))
    zero = "atom" if any(a.loc == 0.0 for a in atom_list) else law.zero_behavior
    return SpectralLaw(name, atom_list, tuple(sorted(support)), density, pieces, zero, params)


def write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
