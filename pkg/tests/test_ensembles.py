import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vinberg_rmt.ensembles import (DaisyDims, EmpiricalSpectrum, WignerParams, WishartIndex,
                                   bipartite_embed, compare, eigenvalues_sym, empirical_measure,
                                   factor_mask, gram, profile_deviation, replica_variances,
                                   sample_wigner_vinberg, sample_wishart_factor, spectrum,
                                   wigner_variance_matrix)
from vinberg_rmt.errors import DimensionError, ParameterError
from vinberg_rmt.laws import Atom, SpectralLaw
from vinberg_rmt.profile_solver import VarianceProfile, make_profile
from vinberg_rmt.wigner_limit import WignerLawParams, wigner_law


@st.composite
def daisies(draw, max_n=40):
    k = draw(st.integers(1, 4))
    b = draw(st.integers(1, 8))
    a = draw(st.integers(1, 12))
    return DaisyDims(a + k * b, a, b, k)


seeds = st.integers(0, 2**64 - 1)


class TestDims:
    def test_invalid(self):
        with pytest.raises(DimensionError):
            DaisyDims(5, 2, 2, 1)
        with pytest.raises(DimensionError):
            DaisyDims(3, 0, 3, 1)

    def test_from_fraction(self):
        assert DaisyDims.from_fraction(4000, 0.3) == DaisyDims(4000, 1200, 2800, 1)
        assert DaisyDims.from_fraction(100, 1.0) == DaisyDims(100, 99, 1, 1)
        d = DaisyDims.from_fraction(101, 0.4, k=3)
        assert d.a + 3 * d.b == 101


class TestWigner:
    def test_example_pattern(self):
        U = sample_wigner_vinberg(DaisyDims(3, 1, 2), WignerParams(), seed=1)
        zeros = {(i, j) for i in range(3) for j in range(3) if U[i, j] == 0}
        assert zeros == {(1, 2), (2, 1)}
        U = sample_wigner_vinberg(DaisyDims(3, 2, 1), WignerParams(), seed=1)
        assert np.all(U != 0)

    @given(daisies(), seeds, st.sampled_from(["gaussian", "rademacher", "uniform"]))
    def test_zero_pattern_and_determinism(self, dims, seed, dist):
        U = sample_wigner_vinberg(dims, WignerParams(dist=dist), seed)
        assert np.array_equal(U, U.T)
        lab = dims.petal_of
        forced = (lab[:, None] >= 0) & (lab[None, :] >= 0) & (lab[:, None] != lab[None, :])
        assert np.all(U[forced] == 0) and np.all(U[~forced] != 0)
        assert np.array_equal(U, sample_wigner_vinberg(dims, WignerParams(dist=dist), seed))

    def test_variances(self):
        dims = DaisyDims(6, 2, 2, 2)
        params = WignerParams(v=2.0, dist="uniform")
        reps = np.stack([sample_wigner_vinberg(dims, params, s) for s in range(4000)])
        emp = reps.var(axis=0)
        exact = wigner_variance_matrix(dims, params)
        assert np.max(np.abs(emp - exact)) < 0.25
        assert exact[0, 0] == 4.0

    def test_invalid_params(self):
        with pytest.raises(ParameterError):
            WignerParams(v=0)
        with pytest.raises(ParameterError):
            WignerParams(dist="cauchy")


class TestWishart:
    def test_example_pattern(self):
        eta = sample_wishart_factor(DaisyDims(3, 1, 2), WishartIndex(1, 1), "gaussian", 3)
        assert (eta != 0).astype(int).tolist() == [[1, 1, 1, 1, 1], [0, 1, 1, 0, 0], [0, 0, 0, 1, 1]]
        Q = gram(eta)
        assert {(i, j) for i in range(3) for j in range(3) if Q[i, j] == 0} == {(1, 2), (2, 1)}

    def test_triangular_and_full(self):
        n = 6
        eta = sample_wishart_factor(DaisyDims(n, n - 1, 1), WishartIndex(1, 0), "gaussian", 0)
        assert np.array_equal(eta != 0, np.triu(np.ones((n, n), bool)))
        eta = sample_wishart_factor(DaisyDims(n, n - 1, 1), WishartIndex(0, 9), "gaussian", 0)
        assert eta.shape == (n, 9) and np.all(eta != 0)

    def test_staircase(self):
        n = 8
        idx = WishartIndex(0.5, 12)
        assert factor_mask(DaisyDims(n, n - 1, 1), idx).shape == (n, 16)
        assert idx.multiplicities(DaisyDims(n, n - 1, 1))[:4].tolist() == [0, 1, 0, 1]

    def test_empty_factor(self):
        with pytest.raises(ParameterError):
            WishartIndex(0, 0)

    @given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 3), st.integers(0, 3), seeds)
    def test_gram_in_vinberg_space(self, a, b, m1, m2, seed):
        if m1 + m2 == 0:
            return
        dims = DaisyDims(a + b, a, b)
        index = WishartIndex(m1, m2)
        eta = sample_wishart_factor(dims, index, "rademacher", seed)
        assert eta.shape[1] == m1 * dims.n + m2 * b
        Q = gram(eta)
        assert np.all(Q[~dims.mask()] == 0)
        assert eigenvalues_sym(Q)[0] >= -1e-10 * max(1.0, np.abs(Q).max())

    def test_gram_examples(self):
        assert np.array_equal(gram(np.eye(3)), np.eye(3))
        x = np.arange(6.0).reshape(2, 3)
        assert np.allclose(gram(x, 4.0), x @ x.T / 4)


class TestLinearAlgebra:
    def test_bipartite_examples(self):
        assert eigenvalues_sym(bipartite_embed([[2.0]])).tolist() == pytest.approx([-2, 2])
        assert eigenvalues_sym(bipartite_embed([[1.0, 0.0]])).tolist() == pytest.approx([-1, 0, 1])

    @given(st.integers(1, 50), st.integers(1, 80), seeds)
    def test_bipartite_identity(self, n, N, seed):
        xi = np.random.default_rng(seed % 2**32).standard_normal((n, N))
        lam = np.clip(eigenvalues_sym(xi @ xi.T if n <= N else xi.T @ xi), 0, None)
        expected = np.sort(np.concatenate([np.sqrt(lam), -np.sqrt(lam), np.zeros(abs(N - n))]))
        got = eigenvalues_sym(bipartite_embed(xi))
        assert np.max(np.abs(got - expected)) <= 1e-9 * max(1.0, expected.max())

    def test_eig_examples(self):
        assert eigenvalues_sym(np.diag([3.0, 1.0, 2.0])).tolist() == [1.0, 2.0, 3.0]
        assert eigenvalues_sym([[0.0, 1.0], [1.0, 0.0]]).tolist() == pytest.approx([-1, 1])
        with pytest.raises(ParameterError):
            eigenvalues_sym([[0.0, 1.0], [0.0, 0.0]])

    @given(st.integers(1, 50), seeds)
    def test_trace_identities(self, n, seed):
        A = np.random.default_rng(seed % 2**32).standard_normal((n, n))
        M = A + A.T
        ev = eigenvalues_sym(M)
        norm = np.linalg.norm(M)
        assert np.all(np.diff(ev) >= 0)
        assert abs(ev.sum() - np.trace(M)) <= 1e-9 * max(1.0, norm)
        assert abs((ev**2).sum() - norm**2) <= 1e-9 * max(1.0, norm**2)


class TestEmpirical:
    def test_examples(self):
        mu = empirical_measure([0, 0, 1])
        assert mu.cdf(0.0) == pytest.approx(2 / 3)
        assert mu.cdf(-np.inf) == 0 and mu.cdf(np.inf) == 1
        h = empirical_measure([0.2, 0.8, 0.9]).histogram([0, 0.5, 1])
        assert h.tolist() == pytest.approx([1 / 3, 2 / 3])
        with pytest.raises(ParameterError):
            empirical_measure([])

    def test_spectrum_validation(self):
        with pytest.raises(ParameterError):
            EmpiricalSpectrum(np.array([2.0, 1.0]))
        with pytest.raises(ParameterError):
            EmpiricalSpectrum(np.array([1.0, 2.0]), n=3)


class TestCompare:
    def test_atoms_only(self):
        law = SpectralLaw("atoms", (Atom(-1.0, 0.5), Atom(1.0, 0.5)), ((-1.0, -1.0), (1.0, 1.0)),
                          lambda x: np.zeros(np.shape(x)))
        eigs = EmpiricalSpectrum(np.array([-1.01] * 5 + [0.99] * 5))
        r = compare(eigs, law, bins=10, atom_window=0.05)
        assert r.ks <= 1e-12 and r.l1 <= 1e-12 and r.atom_estimate == 1.0

    def test_law_against_own_quantiles(self):
        law = wigner_law(WignerLawParams(0.7))
        r = compare(EmpiricalSpectrum(law.quantiles(20000)), law, bins=50)
        assert r.l1 <= 2e-3 and r.ks <= 1e-4

    def test_bins(self):
        law = wigner_law(WignerLawParams(0.7))
        with pytest.raises(ParameterError):
            compare(EmpiricalSpectrum(np.zeros(3)), law, bins=1)

    def test_small_wigner(self):
        dims = DaisyDims.from_fraction(600, 0.3)
        s = spectrum(sample_wigner_vinberg(dims, WignerParams(), 11), math.sqrt(600))
        # near-zero eigenvalues spread over ~sqrt(2/n), so widen the atom window at this size
        r = compare(s, wigner_law(WignerLawParams(0.3)), bins=40, atom_window=0.2)
        assert r.ks < 0.05 and r.l1 < 0.15 and abs(r.atom_estimate - 0.4) < 0.05


class TestProfileDeviation:
    def test_examples(self):
        prof = make_profile("wigner_corner", 4, c=0.5)
        assert profile_deviation(prof.grid, prof) == 0.0
        assert profile_deviation(np.ones((4, 4)), VarianceProfile(np.zeros((4, 4)))) == 1.0

    def test_decreases_with_n(self):
        def delta(n):
            dims = DaisyDims.from_fraction(n, 0.5)
            params = WignerParams()
            return profile_deviation(wigner_variance_matrix(dims, params),
                                     make_profile("wigner_corner", n, c=0.5))
        assert delta(40) < delta(20) < delta(10)

    def test_replicas(self):
        dims = DaisyDims(8, 4, 4)
        reps = np.stack([sample_wigner_vinberg(dims, WignerParams(v_diag=1.0), s) for s in range(3000)])
        var = replica_variances(reps / math.sqrt(8))
        # the limit profile vanishes on the petal diagonal, the finite matrix does not:
        # those 4 cells contribute 4/64 on their own
        assert abs(profile_deviation(var, make_profile("wigner_corner", 8, c=0.5)) - 4 / 64) < 0.03
        with pytest.raises(ParameterError):
            replica_variances(reps[:1])
