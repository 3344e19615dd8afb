import math
from fractions import Fraction

import mpmath as mp
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from cfshrink import ivec


def test_dir_const():
    lo, hi = ivec.dir_const(Fraction(1, 3))
    assert lo <= hi and hi - lo <= 2 * np.spacing(1 / 3)
    assert lo <= 1 / 3 <= hi
    lo, hi = ivec.dir_const(Fraction(1, 2))
    assert lo == hi == 0.5


def _check_contains(fn_lo, fn_hi, ref, xs):
    with mp.workdps(40):
        for x, lo, hi in zip(xs, fn_lo, fn_hi):
            truth = ref(mp.mpf(x))
            assert mp.mpf(lo) <= truth <= mp.mpf(hi), (x, lo, hi)


def test_iexp_containment_grid():
    xs = np.array([-700.0, -3.2, -1.0, -0.3, 0.0, 1e-17, 0.4, 2.0, 5.7, 700.0])
    lo, hi = ivec.iexp(xs, xs)
    _check_contains(lo, hi, mp.exp, xs)


def test_iln_containment_grid():
    xs = np.array([1e-300, 0.1, 0.5, 1.0, 1.0000001, 3.7, 1e10, 1e300])
    lo, hi = ivec.iln(xs, xs)
    _check_contains(lo, hi, mp.log, xs)


def test_ipow_neg_containment_grid():
    xs = np.array([1.0, 2.0, 3.5, 100.0, 12345.0])
    for t in (0.51, 1.0, 1.26, 2.52, 7.0):
        lo, hi = ivec.ipow_neg(xs, xs, t)
        _check_contains(lo, hi, lambda v: v ** (-mp.mpf(t)), xs)


@given(st.lists(st.floats(0.01, 100.0), min_size=1, max_size=40), st.floats(0.51, 4.0))
@settings(max_examples=40, deadline=None)
def test_ipow_neg_containment_random(vals, t):
    xs = np.array(vals)
    lo, hi = ivec.ipow_neg(xs, xs, t)
    _check_contains(lo, hi, lambda v: v ** (-mp.mpf(t)), xs)


def test_interval_widening():
    # interval inputs: lower evaluated at hi end for decreasing maps
    xlo = np.array([2.0]); xhi = np.array([3.0])
    lo, hi = ivec.ipow_neg(xlo, xhi, 1.5)
    assert lo[0] <= 3.0**-1.5 and hi[0] >= 2.0**-1.5


def test_tree_sum_exact_fraction_oracle():
    rng = np.random.default_rng(42)
    x = rng.uniform(0.0, 1.0, size=10_001)
    lo, hi = ivec.tree_sum(x, x)
    exact = sum(Fraction(v) for v in x)
    assert Fraction(lo) <= exact <= Fraction(hi)
    assert hi - lo < 1e-9


def test_tree_sum_directed_pair():
    x = np.array([0.1] * 7)
    lo, hi = ivec.tree_sum(ivec.dn(x), ivec.up(x))
    assert Fraction(lo) <= 7 * Fraction(0.1) <= Fraction(hi)


def test_tree_sum_order_fixed():
    x = np.arange(1, 1000, dtype=np.float64) ** -1.5
    a = ivec.tree_sum(x, x)
    b = ivec.tree_sum(x.copy(), x.copy())
    assert a == b
