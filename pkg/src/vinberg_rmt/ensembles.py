"""Random Vinberg matrices: samplers, eigenvalues and empirical spectra.

Vertices ``0 .. a-1`` form the hub of the daisy graph ``D(a, b, k)`` and the
remaining ``k b`` vertices are split into ``b`` consecutive petals of size
``k``.  A Wigner-Vinberg matrix vanishes exactly on pairs lying in two
distinct petals.  A Wishart factor ``eta`` lives in the column space ``E_k``
whose columns are grouped by the vertex they are attached to; its Gram
matrix ``eta eta^T`` then has the same zero pattern.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg

from .errors import DimensionError, ParameterError
from .laws import SpectralLaw
from .profile_solver import VarianceProfile

DISTRIBUTIONS = ("gaussian", "rademacher", "uniform")


# ---------------------------------------------------------------------------
# Parameter records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DaisyDims:
    """Dimensions of the daisy graph ``D(a, b, k)`` on ``n = a + k b`` vertices."""

    n: int
    a: int
    b: int
    k: int = 1

    def __post_init__(self):
        for name in ("n", "a", "b", "k"):
            val = getattr(self, name)
            if not isinstance(val, (int, np.integer)) or isinstance(val, bool):
                raise DimensionError(f"{name} must be an integer, got {val!r}")
        if self.a < 1 or self.b < 1 or self.k < 1:
            raise DimensionError(f"need a, b, k >= 1, got a={self.a}, b={self.b}, k={self.k}")
        if self.a + self.k * self.b != self.n:
            raise DimensionError(
                f"a + k b must equal n: {self.a} + {self.k}*{self.b} != {self.n}")

    @classmethod
    def from_fraction(cls, n: int, c: float, k: int = 1) -> "DaisyDims":
        """Dims with hub size ``a`` close to ``c n`` (clamped so that ``b >= 1``).

        ``n - a`` is rounded to a multiple of ``k``.  ``c = 1`` yields
        ``(n, n - k, 1, k)``, which for ``k = 1`` is the full symmetric space.
        """
        if not 0.0 <= c <= 1.0:
            raise DimensionError(f"hub fraction must lie in [0, 1], got {c}")
        if n < k + 1:
            raise DimensionError(f"need n > k, got n={n}, k={k}")
        b = int(round((n - c * n) / k))
        b = min(max(b, 1), (n - 1) // k)
        return cls(n, n - k * b, b, k)

    @property
    def petal_of(self) -> np.ndarray:
        """Petal label of each vertex (``-1`` on the hub)."""
        idx = np.arange(self.n)
        return np.where(idx < self.a, -1, (idx - self.a) // self.k)

    def mask(self) -> np.ndarray:
        """Boolean ``n x n`` support of the Vinberg space ``U_n``."""
        lab = self.petal_of
        hub = lab < 0
        return hub[:, None] | hub[None, :] | (lab[:, None] == lab[None, :])


@dataclass(frozen=True)
class WignerParams:
    """Entry law of a Wigner-Vinberg matrix.

    ``v_diag`` defaults to ``2 v`` (the orthogonal-invariant convention);
    the limiting law does not depend on it.
    """

    v: float = 1.0
    v_diag: float | None = None
    dist: str = "gaussian"

    def __post_init__(self):
        if not self.v > 0:
            raise ParameterError(f"v must be positive, got {self.v}")
        if self.v_diag is None:
            object.__setattr__(self, "v_diag", 2.0 * self.v)
        if not self.v_diag > 0:
            raise ParameterError(f"v_diag must be positive, got {self.v_diag}")
        if self.dist not in DISTRIBUTIONS:
            raise ParameterError(f"dist must be one of {DISTRIBUTIONS}, got {self.dist!r}")


@dataclass(frozen=True)
class WishartIndex:
    """Column multiplicities ``k = m1 (1, ..., 1) + m2 (0, ..., 0, 1, ..., 1)``.

    ``m1`` may be a non-negative real: vertex ``j`` then receives
    ``floor(j m1) - floor((j - 1) m1)`` hub-type columns, a staircase whose
    limiting profile slope is ``m1``.
    """

    m1: float = 1
    m2: int = 0
    v: float = 1.0

    def __post_init__(self):
        if self.m1 < 0 or self.m2 < 0:
            raise ParameterError("m1 and m2 must be non-negative")
        if int(self.m2) != self.m2:
            raise ParameterError(f"m2 must be an integer, got {self.m2}")
        if self.m1 + self.m2 < 1:
            raise ParameterError("empty factor: need m1 + m2 >= 1")
        if not self.v > 0:
            raise ParameterError(f"v must be positive, got {self.v}")

    def multiplicities(self, dims: DaisyDims) -> np.ndarray:
        """Number of columns ``k_j`` attached to each vertex ``j = 1 .. n``."""
        j = np.arange(1, dims.n + 1)
        base = np.floor(j * self.m1 + 1e-9) - np.floor((j - 1) * self.m1 + 1e-9)
        return (base + self.m2 * (j > dims.a)).astype(int)


@dataclass(frozen=True)
class EmpiricalSpectrum:
    """Sorted eigenvalues of one ``n x n`` matrix."""

    eigenvalues: np.ndarray = field(repr=False)
    n: int = 0

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.ndim != 1 or ev.size == 0:
            raise ParameterError("an empirical spectrum needs at least one eigenvalue")
        if np.any(np.diff(ev) < 0):
            raise ParameterError("eigenvalues must be sorted non-decreasing")
        n = self.n or ev.size
        if n != ev.size:
            raise ParameterError(f"expected {n} eigenvalues, got {ev.size}")
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "n", n)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def _draw(rng: np.random.Generator, dist: str, shape) -> np.ndarray:
    """Centered unit-variance draws."""
    if dist == "gaussian":
        return rng.standard_normal(shape)
    if dist == "rademacher":
        return rng.integers(0, 2, size=shape).astype(float) * 2.0 - 1.0
    if dist == "uniform":
        return rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size=shape)
    raise ParameterError(f"unknown entry law {dist!r}")


def sample_wigner_vinberg(dims: DaisyDims, params: WignerParams, seed: int) -> np.ndarray:
    """Unscaled Wigner-Vinberg matrix ``U`` (divide by ``sqrt(n)`` for the limit).

    Off-diagonal entries on the daisy support are i.i.d. with variance ``v``,
    the diagonal is i.i.d. with variance ``v_diag``, and entries joining two
    distinct petals are exactly zero.
    """
    if not isinstance(dims, DaisyDims):
        raise DimensionError("dims must be a DaisyDims")
    rng = np.random.default_rng(seed)
    n = dims.n
    upper = np.triu(_draw(rng, params.dist, (n, n)), 1) * math.sqrt(params.v)
    U = upper + upper.T
    U[np.diag_indices(n)] = _draw(rng, params.dist, n) * math.sqrt(params.v_diag)
    U[~dims.mask()] = 0.0
    return U


def factor_mask(dims: DaisyDims, index: WishartIndex) -> np.ndarray:
    """Boolean ``n x N`` support of ``E_k`` (requires petal size 1).

    A column attached to hub vertex ``j <= a`` is supported on rows
    ``1 .. j``; a column attached to petal vertex ``j > a`` on rows
    ``1 .. a`` and row ``j``.
    """
    if dims.k != 1:
        raise DimensionError("Wishart factors are defined for petal size k = 1")
    owner = np.repeat(np.arange(dims.n), index.multiplicities(dims))
    rows = np.arange(dims.n)[:, None]
    hub_col = owner[None, :] < dims.a
    return np.where(hub_col, rows <= owner[None, :], (rows < dims.a) | (rows == owner[None, :]))


def sample_wishart_factor(dims: DaisyDims, index: WishartIndex, dist: str, seed: int) -> np.ndarray:
    """Random ``eta`` in ``E_k`` with i.i.d. centered entries of variance ``v``.

    The number of columns is ``N = sum_j k_j``, which equals
    ``m1 n + m2 b`` for integer ``m1``.
    """
    if dist not in DISTRIBUTIONS:
        raise ParameterError(f"dist must be one of {DISTRIBUTIONS}, got {dist!r}")
    mask = factor_mask(dims, index)
    rng = np.random.default_rng(seed)
    eta = _draw(rng, dist, mask.shape) * math.sqrt(index.v)
    eta[~mask] = 0.0
    return eta


def gram(eta: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """``Q = eta eta^T / scale``, symmetrized against rounding."""
    eta = np.asarray(eta, dtype=float)
    Q = eta @ eta.T / scale
    return 0.5 * (Q + Q.T)


def bipartite_embed(xi: np.ndarray) -> np.ndarray:
    """Symmetric block matrix ``[[0, xi], [xi^T, 0]]``."""
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    n, N = xi.shape
    Y = np.zeros((n + N, n + N))
    Y[:n, n:] = xi
    Y[n:, :n] = xi.T
    return Y


def eigenvalues_sym(M: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Sorted spectrum of a real symmetric matrix (LAPACK ``syevd``).

    Raises
    ------
    ParameterError
        If ``M`` is not square or ``max|M - M^T| > rtol * max(1, max|M|)``.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ParameterError("eigenvalues_sym needs a square matrix")
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if M.size and float(np.max(np.abs(M - M.T))) > rtol * scale:
        raise ParameterError("matrix is not symmetric within tolerance")
    return linalg.eigvalsh(M, driver="evd", check_finite=True)


def spectrum(M: np.ndarray, scale: float = 1.0) -> EmpiricalSpectrum:
    """Eigenvalues of ``M / scale`` wrapped as an :class:`EmpiricalSpectrum`."""
    return EmpiricalSpectrum(eigenvalues_sym(M) / scale, M.shape[0])


# ---------------------------------------------------------------------------
# Empirical measures and comparisons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalMeasure:
    """Uniform measure on a list of eigenvalues."""

    values: np.ndarray = field(repr=False)

    def cdf(self, x):
        """Right-continuous empirical CDF."""
        arr = np.asarray(x, dtype=float)
        out = np.searchsorted(self.values, arr, side="right") / self.values.size
        return float(out) if arr.ndim == 0 else out

    def histogram(self, edges) -> np.ndarray:
        """Fraction of all eigenvalues in ``[e_0, e_1), ..., [e_{m-1}, e_m]``."""
        counts, _ = np.histogram(self.values, bins=np.asarray(edges, dtype=float))
        return counts / self.values.size


def empirical_measure(eigs: EmpiricalSpectrum | Sequence[float]) -> EmpiricalMeasure:
    """Empirical spectral measure of a spectrum (or a plain list of eigenvalues)."""
    if not isinstance(eigs, EmpiricalSpectrum):
        vals = np.sort(np.asarray(eigs, dtype=float))
        if vals.size == 0:
            raise ParameterError("empirical measure of an empty spectrum")
        eigs = EmpiricalSpectrum(vals)
    return EmpiricalMeasure(eigs.eigenvalues)


@dataclass
class ComparisonReport:
    """Distances between an empirical spectrum and a limiting law.

    Attributes
    ----------
    ks : float
        Sup distance between the CDFs on the merged grid.
    l1 : float
        Sum of absolute bin-mass differences.
    atom_estimate : float
        Fraction of eigenvalues within ``atom_window`` of an atom (0 without atoms).
    support_estimate : (float, float)
        Smallest and largest eigenvalue.
    n, bins : int
    edges : (float, float)
        Histogram range.
    atom_window : float
    """

    ks: float
    l1: float
    atom_estimate: float
    support_estimate: tuple[float, float]
    n: int
    bins: int
    edges: tuple[float, float]
    atom_window: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["support_estimate"] = list(self.support_estimate)
        out["edges"] = list(self.edges)
        return out


def histogram_range(law: SpectralLaw, values: np.ndarray, pad: float) -> tuple[float, float]:
    """Law support hull joined with the sample range, widened by ``pad`` times its width."""
    lo, hi = law.support_hull
    lo, hi = min(lo, float(values[0])), max(hi, float(values[-1]))
    width = max(hi - lo, 1e-12)
    return lo - pad * width, hi + pad * width


def compare(eigs: EmpiricalSpectrum, law: SpectralLaw, bins: int = 200,
            atom_window: float = 0.05, pad: float = 0.02) -> ComparisonReport:
    """Compare an empirical spectrum with a limiting law.

    Eigenvalues within ``atom_window`` of an atom are moved onto the atom
    before the KS and L1 distances are computed, so that finite-``n``
    spreading of a point mass does not register as a density mismatch.

    Raises
    ------
    ParameterError
        If ``bins < 2`` or ``atom_window < 0``.
    """
    if bins < 2:
        raise ParameterError(f"need at least 2 bins, got {bins}")
    if atom_window < 0:
        raise ParameterError("atom_window must be non-negative")
    vals = np.array(eigs.eigenvalues, dtype=float)
    near = np.zeros(vals.size, dtype=bool)
    for atom in law.atoms:
        hit = np.abs(vals - atom.loc) <= atom_window
        vals[hit] = atom.loc
        near |= hit
    vals.sort()
    n = vals.size

    F = np.asarray(law.cdf(vals))
    jumps = np.zeros(n)
    for atom in law.atoms:
        jumps += atom.mass * (vals == atom.loc)
    F_left = F - jumps
    upper = np.searchsorted(vals, vals, side="right") / n
    lower = np.searchsorted(vals, vals, side="left") / n
    ks = float(max(np.max(np.abs(F - upper)), np.max(np.abs(F_left - lower))))

    lo, hi = histogram_range(law, vals, pad)
    edges = np.linspace(lo, hi, bins + 1)
    emp = empirical_measure(EmpiricalSpectrum(vals)).histogram(edges)
    theo = law.bin_masses(edges)
    l1 = float(np.sum(np.abs(emp - theo)))
    return ComparisonReport(ks, l1, float(near.mean()) if law.atoms else 0.0,
                            (float(vals[0]), float(vals[-1])), n, bins, (lo, hi), atom_window)


# ---------------------------------------------------------------------------
# Variance profiles of samplers
# ---------------------------------------------------------------------------

def wigner_variance_matrix(dims: DaisyDims, params: WignerParams) -> np.ndarray:
    """Exact ``Var(U_ij)`` of :func:`sample_wigner_vinberg`."""
    var = np.where(dims.mask(), params.v, 0.0)
    var[np.diag_indices(dims.n)] = params.v_diag
    return var


def replica_variances(replicas: np.ndarray) -> np.ndarray:
    """``n Var(Y_ij)`` from replicas of ``Y = U / sqrt(n)`` (shape ``(r, n, n)``).

    Entries are centered by construction, so the variance is estimated by
    the mean of squares.
    """
    reps = np.asarray(replicas, dtype=float)
    if reps.ndim != 3 or reps.shape[0] < 2:
        raise ParameterError("need an array of at least 2 replicas of shape (r, n, n)")
    return reps.shape[1] * np.mean(reps**2, axis=0)


def _profile_at(profile: VarianceProfile, n: int) -> np.ndarray:
    m = profile.m
    if m == n:
        return profile.grid
    if m % n == 0:
        r = m // n
        return profile.grid.reshape(n, r, n, r).mean(axis=(1, 3))
    if n % m == 0:
        r = n // m
        return np.repeat(np.repeat(profile.grid, r, axis=0), r, axis=1)
    raise DimensionError(f"profile size {m} and matrix size {n} are not commensurate")


def profile_deviation(variances: np.ndarray, profile: VarianceProfile) -> float:
    """``delta_0 = (1/n^2) sum_ij |n Var(Y_ij) - sigma_ij|``.

    Parameters
    ----------
    variances : ndarray, shape (n, n)
        ``n Var(Y_ij)`` (for example from :func:`replica_variances`).
    profile : VarianceProfile
        Cell-averaged profile whose size divides, or is divided by, ``n``.
    """
    var = np.asarray(variances, dtype=float)
    if var.ndim != 2 or var.shape[0] != var.shape[1]:
        raise DimensionError("variances must be a square matrix")
    return float(np.mean(np.abs(var - _profile_at(profile, var.shape[0]))))
