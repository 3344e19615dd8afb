"""Level-n dimension equation roots, branch selection, threshold verdicts."""

import math
from fractions import Fraction

import pytest

from cfshrink import rounding as rd
from cfshrink.errors import AmbiguousBranch, NoRoot, NoRootInUnitInterval
from cfshrink.predim import (
    CASE_MAX_S2_S3,
    CASE_S1,
    FAIL,
    PASS,
    PredimResult,
    _f_enclosure,
    f_m_iterate,
    predim_result,
    select_sn,
    solve_predim,
    sstar_estimate,
    threshold_check,
)
from cfshrink.rounding import enclose
from cfshrink.targets import TargetSpec

# independent high-precision bisection on zeta(2s) = B^(s^2), frozen
ZETA_ROOTS = {
    2: 0.9254787365250165,
    4: 0.7869640227730460,
    16: 0.6723737190373779,
}


def assert_straddles(n, B, kind, a1z, M, e):
    """Defining sum must be >= 1 somewhere and <= 1 somewhere inside e."""
    level = 0 if (n == 1 and M is None) else 2
    f_lo = _f_enclosure(n, B, kind, a1z, M, e.lo_float, level)
    f_hi = _f_enclosure(n, B, kind, a1z, M, e.hi_float, level)
    assert f_lo.hi_float >= 1.0
    assert f_hi.lo_float <= 1.0


class TestKindOneLevelOne:
    @pytest.mark.parametrize("B", [2, 4, 16])
    def test_matches_zeta_oracle(self, B):
        e = solve_predim(1, B, 1, tol=1e-6)
        assert e.contains(Fraction(ZETA_ROOTS[B]).limit_denominator(10**15))
        assert e.lo_float <= ZETA_ROOTS[B] <= e.hi_float
        assert e.width_float <= 1e-6
        assert e.certified_gt(Fraction(1, 2))
        assert_straddles(1, B, 1, None, None, e)

    def test_monotone_in_B(self):
        e2 = solve_predim(1, 2, 1, tol=1e-5)
        e4 = solve_predim(1, 4, 1, tol=1e-5)
        e16 = solve_predim(1, 16, 1, tol=1e-5)
        assert e16.hi < e4.lo < e4.hi < e2.lo


class TestConventions:
    def test_kind2_infinite_digit(self):
        assert solve_predim(3, 4, 2, math.inf) == enclose(1)

    def test_kind3_infinite_digit(self):
        assert solve_predim(3, 4, 3, math.inf) == enclose(0)


class TestNoRootCases:
    def test_sum_above_one_at_right_edge(self):
        # base 2, level 1, third kind, unit digit: sum at s=1 is
        # zeta(2)/sqrt(2) = 1.163... > 1, so no root in (1/2, 1]
        with pytest.raises(NoRootInUnitInterval):
            solve_predim(1, 2, 3, 1)

    def test_truncated_alphabet_root_below_domain(self):
        with pytest.raises(NoRoot):
            solve_predim(3, 4, 1, M=1)


class TestCertifiedRoots:
    @pytest.mark.parametrize(
        "n,B,kind,a1z",
        [
            (2, 4, 1, None),
            (3, 2, 1, None),
            (2, 4, 2, 1),
            (2, 4, 3, 1),
            (2, 16, 2, 16),
            (3, 16, 3, 64),
            (5, 2, 2, 6),
        ],
    )
    def test_bracket_straddles_and_is_tight(self, n, B, kind, a1z):
        e = solve_predim(n, B, kind, a1z, tol=1e-3)
        assert e.width_float <= 1e-3
        assert e.lo_float > 0.5
        assert_straddles(n, B, kind, a1z, None, e)

    def test_restricted_alphabet_root_below_full(self):
        full = solve_predim(2, 4, 1, tol=1e-4)
        m20 = solve_predim(2, 4, 1, M=20, tol=1e-4)
        m5 = solve_predim(2, 4, 1, M=5, tol=1e-4)
        assert m5.hi < m20.lo
        assert m20.hi < full.lo
        assert_straddles(2, 4, 1, None, 20, m20)

    def test_tightening_tol_stays_inside(self):
        coarse = solve_predim(2, 4, 1, tol=1e-3)
        fine = solve_predim(2, 4, 1, tol=1e-4)
        assert coarse.lo_float <= fine.lo_float
        assert fine.hi_float <= coarse.hi_float


class TestValidation:
    def test_bad_kind(self):
        with pytest.raises(ValueError):
            solve_predim(1, 4, 4)

    def test_missing_digit(self):
        with pytest.raises(ValueError):
            solve_predim(1, 4, 2)

    def test_base_not_above_one(self):
        with pytest.raises(ValueError):
            solve_predim(1, 1, 1)

    def test_zero_digit(self):
        with pytest.raises(ValueError):
            solve_predim(1, 4, 2, 0)

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            solve_predim(1, 4, 1, tol=0.0)


class TestSelectSn:
    def test_first_branch(self):
        s1, s2, s3 = (rd.from_f64(x, x) for x in (0.60, 0.70, 0.55))
        sn, branch = select_sn(s1, s2, s3)
        assert branch == CASE_S1 and sn == s1

    def test_second_branch_takes_interval_max(self):
        s1, s2, s3 = (rd.from_f64(x, x) for x in (0.80, 0.60, 0.70))
        sn, branch = select_sn(s1, s2, s3)
        assert branch == CASE_MAX_S2_S3
        assert sn.lo_float == pytest.approx(0.70)

    def test_tie_goes_to_first_branch(self):
        s = rd.from_f64(0.66, 0.66)
        sn, branch = select_sn(s, s, rd.from_f64(0.5, 0.5))
        assert branch == CASE_S1

    def test_overlap_raises_without_refine(self):
        s1 = rd.from_f64(0.60, 0.70)
        s2 = rd.from_f64(0.65, 0.75)
        with pytest.raises(AmbiguousBranch):
            select_sn(s1, s2, rd.from_f64(0.5, 0.5))

    def test_overlap_resolved_by_refine(self):
        s1 = rd.from_f64(0.60, 0.70)
        s2 = rd.from_f64(0.65, 0.75)
        s3 = rd.from_f64(0.50, 0.50)

        def refine():
            return rd.from_f64(0.62, 0.63), rd.from_f64(0.69, 0.70), s3

        sn, branch = select_sn(s1, s2, s3, refine=refine)
        assert branch == CASE_S1
        assert sn.hi_float == pytest.approx(0.63)


def _make_result(n, B, a1z, s1, s2, s3):
    sn, branch = select_sn(s1, s2, s3)
    return PredimResult(
        n=n, B=B, a1z=a1z, s1=s1, s2=s2, s3=s3, sn=sn, branch=branch, thresholds=()
    )


class TestThresholds:
    def test_zero_target_all_pass(self):
        s1 = solve_predim(2, 4, 1, tol=1e-3)
        res = _make_result(2, 4, math.inf, s1, enclose(1), enclose(0))
        assert threshold_check(res) == (PASS, PASS, PASS, PASS)

    def test_constructed_large_digit_first_item(self):
        s1 = solve_predim(2, 4, 1, tol=1e-3)
        a1z = math.ceil(4 ** (2 * s1.hi_float)) + 1
        res = _make_result(
            2, 4, a1z, s1, rd.from_f64(0.99, 0.99), rd.from_f64(0.6, 0.6)
        )
        assert res.branch == CASE_S1
        assert threshold_check(res)[0] == PASS

    def test_violating_digit_fails_first_item(self):
        # synthetic data violating the implication: branch one, tiny digit
        s1 = rd.from_f64(0.8, 0.8)
        res = _make_result(3, 4, 1, s1, rd.from_f64(0.9, 0.9), rd.from_f64(0.6, 0.6))
        verdicts = threshold_check(res)
        assert verdicts[0] == FAIL

    def test_computed_families_never_fail(self):
        for B in (2, 4):
            for a1z in (1, 7):
                res = predim_result(2, B, a1z, tol=1e-3)
                assert FAIL not in res.thresholds, (B, a1z, res.thresholds)


class TestPredimResult:
    def test_ones_target_second_branch(self):
        res = predim_result(2, 4, 1, tol=1e-3)
        assert res.branch == CASE_MAX_S2_S3
        assert res.s1.lo > res.s2.hi
        # the selected root is the interval max of s2 and s3
        assert res.sn.lo >= res.s3.lo and res.sn.hi >= res.s3.hi
        assert res.flags == ()
        assert FAIL not in res.thresholds

    def test_clipped_root_is_flagged(self):
        res = predim_result(1, 2, 1, tol=1e-3)
        assert "s3_no_root_in_unit_interval" in res.flags
        assert res.s3 == enclose(1)
        assert res.branch == CASE_MAX_S2_S3
        assert res.sn.hi_float == 1.0

    def test_zero_target_selects_first_branch(self):
        res = predim_result(2, 4, math.inf, tol=1e-3)
        assert res.branch == CASE_S1
        assert res.s2 == enclose(1)
        assert res.s3 == enclose(0)
        assert res.sn == res.s1


class TestSstarEstimate:
    def test_zero_target_tracks_s1(self):
        est = sstar_estimate(TargetSpec.zero(), 4, range(1, 4), tol=1e-3)
        assert est.window == (1, 3)
        assert est.skipped == ()
        assert [r.branch for r in est.results] == [CASE_S1] * 3
        for r in est.results:
            assert r.sn == r.s1
        assert list(est.running_lo) == sorted(est.running_lo)
        assert list(est.running_hi) == sorted(est.running_hi)

    def test_ones_target_flags_but_does_not_skip(self):
        est = sstar_estimate(TargetSpec.constant((), (1,)), 2, [1, 2], tol=1e-3)
        assert est.skipped == ()
        assert "s3_no_root_in_unit_interval" in est.results[0].flags
        assert est.results[1].flags == ()

    def test_monotone_in_B(self):
        lo = sstar_estimate(TargetSpec.zero(), 4, [2], tol=1e-3).results[0]
        hi = sstar_estimate(TargetSpec.zero(), 16, [2], tol=1e-3).results[0]
        assert hi.sn.hi < lo.sn.lo

    def test_empty_window_rejected(self):
        with pytest.raises(ValueError):
            sstar_estimate(TargetSpec.zero(), 4, [])


class TestFmIteration:
    def test_first_is_identity(self):
        assert f_m_iterate(1, 0.37) == 0.37

    def test_second_is_square(self):
        s = Fraction(3, 7)
        assert f_m_iterate(2, s) == s * s
        assert f_m_iterate(2, Fraction(1, 2)) == Fraction(1, 4)

    def test_third_closed_form(self):
        s = Fraction(2, 5)
        assert f_m_iterate(3, s) == s**3 / (1 - s + s * s)

    def test_order_must_be_positive(self):
        with pytest.raises(ValueError):
            f_m_iterate(0, 0.5)
