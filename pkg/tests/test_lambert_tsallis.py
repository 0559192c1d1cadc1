import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vinberg_rmt import lambert_tsallis as lt
from vinberg_rmt.errors import BranchCutError, DomainError, ParameterError
from vinberg_rmt.lambert_tsallis import INF, LTParams

PAIRS = [(1, 0), (2, -1), (INF, 0), (INF, -1), (-1, -1), (-2, -1), (1, 0.5)]


@st.composite
def admissible(draw):
    """Admissible (kappa, gamma) pairs across every forbidden-set case."""
    kind = draw(st.sampled_from(["pos", "inf", "neg"]))
    if kind == "pos":
        k = draw(st.floats(1.0, 8.0))
        g = draw(st.floats(-3.0, min(1.0 / k, 0.95)))
    elif kind == "inf":
        k = INF
        g = draw(st.floats(-3.0, 0.0))
    else:
        k = -draw(st.floats(0.5, 6.0))
        g = 1.0 / k - draw(st.floats(0.0, 3.0))
    return LTParams(k, g)


upper = st.tuples(st.floats(-30, 30), st.floats(1e-3, 30)).map(lambda t: complex(*t))


class TestParams:
    def test_inf_token(self):
        assert LTParams("inf", 0).kappa == INF
        assert lt.parse_kappa("+inf") == INF
        assert lt.format_kappa(INF) == "inf"

    @pytest.mark.parametrize("k,g", [(0.5, 0), (2, 0.7), (1, 1.0), (0, -1)])
    def test_inadmissible(self, k, g):
        with pytest.raises(ParameterError, match="gamma <= 1/kappa <= 1"):
            LTParams(k, g)

    def test_gamma_snaps_to_boundary(self):
        assert LTParams(2, 0.5 + 1e-14).gamma == 0.5


class TestTsallisExp:
    def test_examples(self):
        z = 0.3 + 0.2j
        assert lt.exp_kappa(z, 1) == pytest.approx(1 + z, abs=1e-15)
        assert lt.exp_kappa(1.0, INF) == pytest.approx(math.e, rel=1e-15)
        assert abs(lt.ln_kappa(lt.exp_kappa(0.5, 3), 1 / 3) - 0.5) <= 1e-14

    def test_cut(self):
        with pytest.raises(BranchCutError):
            lt.exp_kappa(-3.0, 2.5)
        with pytest.raises(BranchCutError):
            lt.ln_kappa(-1.0, 0.5)

    @given(st.floats(1.0, 10.0), upper.filter(lambda z: abs(z) < 5))
    def test_log_inverts_exp(self, k, z):
        base = 1 + z / k
        if abs(k * cmath.phase(base)) >= math.pi - 1e-6:
            return
        back = lt.ln_kappa(lt.exp_kappa(z, k), 1 / k)
        assert abs(back - z) <= 1e-11 * (1 + abs(z))


class TestTsallisFunction:
    def test_examples(self):
        assert lt.f_kg(1.0, LTParams(1, 0)) == pytest.approx(2.0)
        assert lt.f_kg(1.0, LTParams(INF, 0)) == pytest.approx(math.e)

    @given(admissible())
    def test_normalization_at_zero(self, p):
        assert lt.f_kg(0.0, p) == 0
        assert abs(lt.f_kg_prime(0.0, p) - 1) <= 1e-15

    @given(admissible(), upper.filter(lambda z: abs(z) < 3))
    def test_derivative_matches_difference_quotient(self, p, z):
        k, _ = p.reduced()
        try:
            h = 1e-6
            num = (lt.f_kg(z + h, p) - lt.f_kg(z - h, p)) / (2 * h)
            der = lt.f_kg_prime(z, p)
        except DomainError:
            return
        assert abs(num - der) <= 1e-5 * (1 + abs(der))


class TestCriticalPointsAndForbiddenSet:
    def test_critical_examples(self):
        assert lt.critical_points(LTParams(INF, 0)) == (-INF, -1.0)
        a1, a2 = lt.critical_points(LTParams(2, -1))
        assert (a1, a2) == pytest.approx((-0.5, 2.0))
        a1, a2 = lt.critical_points(LTParams(1, -1))
        assert (a1, a2) == pytest.approx((1 - math.sqrt(2), 1 + math.sqrt(2)))

    def test_forbidden_examples(self):
        S = lt.forbidden_set(LTParams(INF, 0))
        assert S.case == "S2" and S.lo == -INF and S.hi == pytest.approx(-1 / math.e, rel=1e-15)
        S = lt.forbidden_set(LTParams(1, 0))
        assert S.case == "S2" and S.hi == pytest.approx(-0.25)
        S = lt.forbidden_set(LTParams(2, -1))
        assert S.case == "S1" and (S.lo, S.hi) == pytest.approx((-8.0, -0.1875))

    @given(admissible())
    def test_forbidden_set_invariants(self, p):
        S = lt.forbidden_set(p)
        assert S.lo < S.hi < 0
        if S.case in ("S2", "S3"):
            assert S.lo == -INF
        # In S1/S4 the left endpoint is finite; it only leaves the float
        # range when |gamma| is so small that f(alpha) overflows.

    @given(admissible())
    def test_endpoint_identity(self, p):
        k = p.kappa
        for a in lt.critical_points(p):
            if not math.isfinite(a) or abs(a) > 50 or abs(1 + p.gamma * a) < 1e-8:
                continue
            if k != INF and 1 + a / k <= 1e-8:
                continue
            closed = -a * a * (math.exp(a) if k == INF else (1 + a / k) ** (k - 1))
            assert abs(complex(lt.f_kg(a, p)) - closed) <= 1e-12 * (1 + abs(closed))


class TestHomographic:
    def test_examples(self):
        h = lt.homographic_reduce(LTParams(-1, -1))
        assert (h.kappa, h.gamma) == (1.0, 0.0)
        # (-2, 0) violates gamma <= 1/kappa, so the identity is checked on (-2, -1).
        h = lt.homographic_reduce(LTParams(-2, -1))
        assert (h.kappa, h.gamma) == (2.0, -0.5)
        z = 0.3j
        assert abs(lt.f_kg(z, LTParams(-2, -1)) - lt.f_kg(h.forward(z), LTParams(2, -0.5))) <= 1e-13
        assert abs(h.inverse(h.forward(z)) - z) <= 1e-15

    def test_requires_negative_kappa(self):
        with pytest.raises(ParameterError):
            lt.homographic_reduce(LTParams(2, 0))


class TestW:
    def test_examples(self):
        assert lt.w_main(2.0, LTParams(1, 0)) == pytest.approx(1.0, abs=1e-14)
        assert lt.w_main(6.0, LTParams(1, 0)) == pytest.approx(2.0, abs=1e-14)
        assert lt.w_main(math.e, LTParams(INF, 0)) == pytest.approx(1.0, abs=1e-14)
        for k, g in PAIRS:
            assert lt.w_main(0.0, LTParams(k, g)) == 0

    @pytest.mark.parametrize("k,g", PAIRS)
    def test_closure_of_S_rejected(self, k, g):
        p = LTParams(k, g)
        S = lt.forbidden_set(p)
        inside = S.hi - 0.1 * abs(S.hi) if S.lo == -INF else 0.5 * (S.lo + S.hi)
        for x in (inside, S.hi):
            with pytest.raises(DomainError):
                lt.w_main(x, p)

    @given(admissible(), upper)
    def test_inversion_reflection_halfplane(self, p, z):
        w = lt.w_main(z, p)
        assert abs(lt.f_kg(w, p) - z) <= 1e-12 * (1 + abs(z))
        assert w.imag > 0
        assert abs(lt.w_main(z.conjugate(), p) - w.conjugate()) <= 1e-13 * (1 + abs(w))

    @given(admissible(), st.floats(1e-3, 40.0))
    def test_real_axis_right_of_S(self, p, r):
        S = lt.forbidden_set(p)
        x = S.hi + r
        if x == 0:
            return
        w = lt.w_main(x, p)
        assert w.imag == 0
        assert abs(lt.f_kg(w, p) - x) <= 1e-12 * (1 + abs(x))

    @pytest.mark.parametrize("k,g", [(1, -1), (2, -1), (3, -0.5)])
    def test_region_confinement(self, k, g):
        p = LTParams(k, g)
        for z in [0.1j, 1 + 1j, -3 + 0.2j, 5j, -40 + 1j]:
            w = lt.w_main(z, p)
            assert 0 < cmath.phase(1 + w / k) < math.pi / (k + 1)
        assert abs(lt.w_main(1e9j, p) + 1 / g) < 1e-2

    @pytest.mark.parametrize("k,g", PAIRS)
    def test_taylor_order(self, k, g):
        radii = np.array([1e-2, 1e-3, 1e-4])
        errs = [abs(lt.w_main(r * cmath.exp(0.7j), LTParams(k, g))
                    - lt.w_taylor(r * cmath.exp(0.7j), k, g)) for r in radii]
        slope = np.polyfit(np.log(radii), np.log(errs), 1)[0]
        assert slope >= 3.9

    def test_taylor_cubic_coefficient(self):
        c1, c2, c3 = lt.taylor_coefficients(2.0, -1.0)
        assert (c1, c2) == (1.0, -2.0)
        assert c3 == pytest.approx(1 + 3 + 7 / 4)

    def test_uncorrected_cubic_term_is_third_order(self):
        # the variant with (3 kappa + 1)/kappa in place of (3 kappa + 1)/(2 kappa) is off by
        # (3 kappa + 1)/(2 kappa) z^3, so its error only decays like |z|^3
        k, g = 2.0, -1.0
        radii = np.array([1e-2, 1e-3, 1e-4])
        z = radii * cmath.exp(0.7j)
        bad = z + (g - 1) * z**2 + (g * g - 3 * g + (3 * k + 1) / k) * z**3
        errs = np.abs(np.asarray(lt.w_main(z, LTParams(k, g))) - bad)
        assert np.polyfit(np.log(radii), np.log(errs), 1)[0] == pytest.approx(3.0, abs=0.05)


class TestBoundary:
    @pytest.mark.parametrize("k,g", PAIRS)
    def test_boundary_residual(self, k, g):
        p = LTParams(k, g)
        S = lt.forbidden_set(p)
        lo = S.lo if math.isfinite(S.lo) else S.hi - 20
        for x in np.linspace(lo, S.hi, 9)[1:-1]:
            b = lt.boundary_solutions(float(x), p)
            assert b.k_plus.imag > 0 and b.k_minus == b.k_plus.conjugate()
            fx = complex(lt.f_kg(b.k_plus, p))
            assert abs(fx.imag) <= 1e-10 * (1 + abs(x)) and abs(fx.real - x) <= 1e-10 * (1 + abs(x))

    def test_lambert_case(self):
        p = LTParams(INF, 0)
        for x in [-0.5, -1.0, -5.0]:
            b = lt.boundary_solutions(x, p)
            assert 0 < b.k_plus.imag < math.pi
        b = lt.boundary_solutions(-1 / math.e - 1e-10, p)
        assert abs(b.k_plus + 1) < 1e-3

    def test_outside_S(self):
        with pytest.raises(DomainError):
            lt.boundary_solutions(1.0, LTParams(1, 0))
