"""Pressure sums over restricted digit sets: exact laws, routes, roots."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfshrink import predim
from cfshrink import pressure as pr
from cfshrink import rounding as rd
from cfshrink.errors import DepthTooLarge, NoRoot
from cfshrink.surd import Quad

GOLDEN = (math.sqrt(5) - 1) / 2


class TestXmin:
    @pytest.mark.parametrize("A", [{1}, {2}, {1, 2}, {3, 7}, {2, 5, 9}])
    def test_defining_equation_exact(self, A):
        x = pr.x_min_value(A)
        amin, amax = min(A), max(A)
        residual = amax * x * x + amax * amin * x - amin
        assert residual.sign() == 0
        assert 0 < x < 1

    def test_known_values(self):
        assert float(pr.x_min_value({1})) == pytest.approx(GOLDEN, abs=1e-15)
        assert float(pr.x_min_value({2})) == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
        assert float(pr.x_min_value({1, 2})) == pytest.approx(
            (math.sqrt(3) - 1) / 2, abs=1e-15
        )

    def test_smallest_attractor_point_is_quad(self):
        assert isinstance(pr.x_min_value({1, 2, 3}), Quad)


class TestFibonacciClosedForm:
    # over {1} the sup sum collapses: q_n + g q_{n-1} = phi^n exactly,
    # so (1/n) log Sigma_n = -2 s log phi - s^2 log B at every depth
    def test_every_depth(self):
        s, B = 0.7, 4
        est = pr.pressure_estimate(pr.PotentialSpec(pr.PHI1, s, B), {1}, 6)
        target = -2 * s * math.log((1 + math.sqrt(5)) / 2) - s * s * math.log(B)
        for v in est.sup_values:
            assert v.lo_float <= target <= v.hi_float
            assert v.hi_float - v.lo_float < 1e-9
        for r in est.ratios:
            assert r == pytest.approx(target, abs=1e-9)
        assert est.extrapolated == pytest.approx(target, abs=1e-9)

    def test_single_digit_pressure_always_negative(self):
        for s in (0.1, 0.5, 1.0, 1.4):
            est = pr.pressure_estimate(pr.PotentialSpec(pr.PHI1, s, 2), {1}, 5)
            assert est.sup_values[-1].hi_float < 0


class TestConstantShift:
    def test_phi2_alpha_zero_vs_phi1(self):
        # same s: the two potentials differ by the constant (s^2 - s) log B
        s, B, depth = 0.8, 4, 4
        p1 = pr.pressure_estimate(pr.PotentialSpec(pr.PHI1, s, B), {1, 2, 3}, depth)
        p2 = pr.pressure_estimate(
            pr.PotentialSpec(pr.PHI2, s, B, alpha=0), {1, 2, 3}, depth
        )
        shift = (Fraction(4, 5) ** 2 - Fraction(4, 5)) * math.log(B)
        for a, b in zip(p1.sup_values, p2.sup_values):
            assert b.mid_float - a.mid_float == pytest.approx(float(shift), abs=1e-10)

    def test_phi3_beta_zero_vs_phi1(self):
        # c3 - c1 = (s^2 - s/2) log B, independent of depth
        s, B, depth = 0.75, 2, 3
        p1 = pr.pressure_estimate(pr.PotentialSpec(pr.PHI1, s, B), {1, 2}, depth)
        p3 = pr.pressure_estimate(
            pr.PotentialSpec(pr.PHI3, s, B, beta=0), {1, 2}, depth
        )
        shift = (s * s - 0.5 * s) * math.log(B)
        for a, b in zip(p1.x0_values, p3.x0_values):
            assert b.mid_float - a.mid_float == pytest.approx(shift, abs=1e-10)


class TestRoutes:
    def test_exact_and_dp_overlap(self):
        phi = pr.PotentialSpec(pr.PHI1, 0.8, 2)
        ex = pr.pressure_estimate(phi, {1, 2, 3}, 5, method="exact")
        dp = pr.pressure_estimate(phi, {1, 2, 3}, 5, method="dp")
        for a, b in zip(ex.sup_values + ex.x0_values, dp.sup_values + dp.x0_values):
            assert a.lo_float <= b.hi_float and b.lo_float <= a.hi_float

    def test_dp_rejects_gappy_alphabet(self):
        phi = pr.PotentialSpec(pr.PHI1, 0.8, 2)
        with pytest.raises(DepthTooLarge):
            pr.pressure_estimate(phi, {1, 3}, 4, method="dp")

    def test_budget_exceeded_without_dp_fallback(self):
        phi = pr.PotentialSpec(pr.PHI1, 0.8, 2)
        with pytest.raises(DepthTooLarge):
            pr.pressure_estimate(phi, {1, 3}, 30)

    def test_exact_overflow_guard(self):
        phi = pr.PotentialSpec(pr.PHI1, 0.8, 2)
        with pytest.raises(DepthTooLarge):
            pr.pressure_estimate(phi, {999_999, 1_000_000}, 9, method="exact")

    def test_monotone_in_alphabet(self):
        phi = pr.PotentialSpec(pr.PHI1, 0.8, 2)
        vals = []
        for A in ({1, 2}, {1, 2, 3}, {1, 2, 3, 4, 5}):
            est = pr.pressure_estimate(phi, A, 4, method="exact")
            vals.append(est.x0_values[-1])
        assert vals[0].hi_float < vals[1].lo_float < vals[1].hi_float < vals[2].lo_float


class TestSupVersusX0:
    @settings(max_examples=40, deadline=None)
    @given(
        amax=st.integers(min_value=1, max_value=6),
        depth=st.integers(min_value=1, max_value=4),
        s=st.floats(min_value=0.55, max_value=1.2),
    )
    def test_ordering_and_gap(self, amax, depth, s):
        # terms satisfy q^{-2s} >= (q + x q')^{-2s} >= 4^{-s} q^{-2s}
        A = set(range(1, amax + 1))
        est = pr.pressure_estimate(pr.PotentialSpec(pr.PHI1, s, 4), A, depth,
                                   method="exact")
        for n, (sup, x0) in enumerate(zip(est.sup_values, est.x0_values), 1):
            assert x0.mid_float >= sup.mid_float - 1e-12
            gap = x0.mid_float - sup.mid_float
            assert n * gap <= s * math.log(4) + 1e-9


class TestRoot:
    def test_against_truncated_predim_roots(self):
        # the pressure root should sit near the truncated-alphabet exponents
        res = pr.pressure_root(pr.PHI1, 4, None, range(1, 21), depth=8)
        assert 0.5 < res.root < 1.0
        assert not res.certified
        for n in (4, 5, 6):
            e = predim.solve_predim(n, 4, 1, M=20, tol=1e-3)
            mid = 0.5 * (e.lo_float + e.hi_float)
            assert abs(res.root - mid) < 0.02
        br = res.certified_bracket
        assert 0.5 < br.lo_float < br.hi_float < 1.0
        assert br.hi_float - br.lo_float < 0.05

    def test_root_decreases_with_base(self):
        r2 = pr.pressure_root(pr.PHI1, 2, None, range(1, 6), depth=6)
        r16 = pr.pressure_root(pr.PHI1, 16, None, range(1, 6), depth=6)
        assert r16.root < r2.root

    def test_no_root_when_pressure_stays_positive(self):
        with pytest.raises(NoRoot):
            pr.pressure_root(pr.PHI3, 2, -5.0, range(1, 4), depth=4)

    def test_single_digit_degenerates_to_probing_floor(self):
        res = pr.pressure_root(pr.PHI1, 4, None, {1}, depth=6)
        assert res.root <= 0.05
        assert res.certified_bracket.hi_float <= 0.05

    def test_depth_validation(self):
        with pytest.raises(ValueError):
            pr.pressure_root(pr.PHI1, 4, None, {1, 2}, depth=1)


class TestEmDimension:
    def test_order_and_range(self):
        d2 = predim.em_dimension(2, 4, M=10, depth=6)
        d1 = predim.em_dimension(1, 4, M=10, depth=6)
        assert 0.5 < d1.lo_float and d1.hi_float < 1.0
        assert 0.5 < d2.lo_float and d2.hi_float < 1.0
        assert d1.hi_float < d2.hi_float

    def test_rejects_other_m(self):
        with pytest.raises(ValueError):
            predim.em_dimension(3, 4)


class TestValidation:
    def test_spec_errors(self):
        with pytest.raises(ValueError):
            pr.PotentialSpec("PHI9", 0.7, 4)
        with pytest.raises(ValueError):
            pr.PotentialSpec(pr.PHI1, 0.0, 4)
        with pytest.raises(ValueError):
            pr.PotentialSpec(pr.PHI1, 0.7, 1)
        with pytest.raises(ValueError):
            pr.PotentialSpec(pr.PHI2, 0.7, 4)
        with pytest.raises(ValueError):
            pr.PotentialSpec(pr.PHI3, 0.7, 4)

    def test_estimate_errors(self):
        phi = pr.PotentialSpec(pr.PHI1, 0.7, 4)
        with pytest.raises(ValueError):
            pr.pressure_estimate(phi, set(), 3)
        with pytest.raises(ValueError):
            pr.pressure_estimate(phi, {0, 1}, 3)
        with pytest.raises(ValueError):
            pr.pressure_estimate(phi, {1, 2}, 0)
        with pytest.raises(ValueError):
            pr.pressure_estimate(phi, {1, 2}, 3, method="magic")

    def test_beta_warning(self):
        with pytest.warns(UserWarning):
            pr.PotentialSpec(pr.PHI3, 0.7, 4, beta=1.0)

    def test_range_warnings(self):
        phi = pr.PotentialSpec(pr.PHI2, 0.7, 4, alpha=0.1)
        with pytest.warns(UserWarning):
            msgs = phi.range_warnings(0.6, 0.8)
        assert msgs and "alpha" in msgs[0]
        quiet = pr.PotentialSpec(pr.PHI2, 0.7, 4, alpha=0.7)
        assert quiet.range_warnings(0.6, 0.8) == []


class TestVariation:
    def test_matches_brute_force(self):
        from itertools import product

        A, n, s = (1, 2), 3, 0.6
        var = pr.variation_check(pr.PotentialSpec(pr.PHI1, s, 4), n, A)
        worst = 0.0
        for w in product(A, repeat=n):
            p, q, pp, qq = 0, 1, 1, 0
            for a in w:
                p, pp = a * p + pp, p
                q, qq = a * q + qq, q
            e0 = Fraction(p, q)
            e1 = Fraction(p + pp, q + qq)
            worst = max(worst, 2 * s * abs(math.log(e0 / e1)))
        assert var.lo_float - 1e-9 <= worst <= var.hi_float + 1e-9

    def test_shrinks_with_depth(self):
        phi = pr.PotentialSpec(pr.PHI1, 0.7, 4)
        v2 = pr.variation_check(phi, 2, {1, 2, 3})
        v5 = pr.variation_check(phi, 5, {1, 2, 3})
        assert v5.hi_float < v2.hi_float

    def test_depends_only_on_exponent(self):
        a = pr.variation_check(pr.PotentialSpec(pr.PHI1, 0.6, 4), 3, {1, 2})
        b = pr.variation_check(pr.PotentialSpec(pr.PHI3, 0.6, 9, beta=0.1), 3, {1, 2})
        assert a.lo_float == b.lo_float and a.hi_float == b.hi_float
