import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vinberg_rmt.laws import Atom, SpectralLaw, flat_end_piece, mixture_with_atom
from vinberg_rmt.wigner_limit import WignerLawParams, wigner_law
from vinberg_rmt.wishart_limit import mp_law


def semicircle() -> SpectralLaw:
    def density(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) <= 2, np.sqrt(np.clip(4 - x * x, 0, None)) / (2 * math.pi), 0.0)
    return SpectralLaw("sc", (), ((-2.0, 2.0),), density, (flat_end_piece(-2, 2, density),))


class TestQuadrature:
    def test_semicircle_cdf(self):
        law = semicircle()
        assert law.total_mass() == pytest.approx(1.0, abs=1e-12)
        x = np.array([-3.0, -1.0, 0.0, 1.0, 3.0])
        exact = 0.5 + (x * np.sqrt(np.clip(4 - x * x, 0, None)) / 4
                       + np.arcsin(np.clip(x / 2, -1, 1))) / math.pi
        assert np.max(np.abs(law.cdf(x) - exact)) <= 1e-12

    @given(st.floats(-2.5, 2.5), st.floats(0.0, 1.0))
    def test_cdf_monotone(self, x, h):
        law = wigner_law(WignerLawParams(0.3))
        assert law.cdf(x + h) >= law.cdf(x) - 1e-15

    def test_bin_masses_sum_to_one(self):
        law = mp_law(0.5)
        edges = np.linspace(-0.1, 3.2, 41)
        m = law.bin_masses(edges)
        assert m.sum() == pytest.approx(1.0, abs=1e-10) and np.all(m >= -1e-15)
        j = np.searchsorted(edges, 0.0, side="right") - 1
        assert m[j] >= 0.5

    def test_quantiles_invert_cdf(self):
        law = semicircle()
        q = law.quantiles(9)
        assert np.allclose(law.cdf(q), (np.arange(9) + 0.5) / 9, atol=1e-12)


class TestMixture:
    def test_dilation_and_atom(self):
        base = mp_law(1.0)
        law = mixture_with_atom(base, 0.5, 0.5, 0.5, "mix", {})
        assert law.total_mass() == pytest.approx(1.0, abs=1e-10)
        assert law.atoms == (Atom(0.0, 0.5),)
        assert law.density(1.0) == pytest.approx(0.5 * base.density(2.0) / 0.5)
        assert law.support_hull == pytest.approx((0.0, 2.0))

    def test_to_dict(self):
        d = wigner_law(WignerLawParams(0.3)).to_dict()
        assert d["atoms"] == [{"loc": 0.0, "mass": pytest.approx(0.4)}]
        assert d["zero_behavior"] == "atom" and d["c"] == 0.3
