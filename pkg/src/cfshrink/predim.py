"""Certified roots of the level-n dimension equations and branch selection.

All three equation kinds share the shape weight(s) * Lambda_n(s) = 1 with
Lambda_n the continuant power sum, strictly decreasing in s.  Each root is
located with a fast float estimate, then certified by evaluating the sum's
enclosure at the two bracket endpoints: value >= 1 on the left endpoint,
<= 1 on the right, so the bracket provably contains the root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import rounding as rd
from . import sums
from .errors import (
    AmbiguousBranch,
    CfshrinkError,
    NoRoot,
    NoRootInUnitInterval,
    PrecisionExhausted,
)
from .rounding import Enclosure, enclose
from .targets import TargetSpec, first_digit

CASE_S1 = "CASE_S1"
CASE_MAX_S2_S3 = "CASE_MAX_S2_S3"

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"

# bisection domain is (1/2, 1]; stay clear of the s = 1/2 pole
LEFT_EDGE = 0.5055

_KINDS = {1: sums.PRE1, 2: sums.PRE2, 3: sums.PRE3}


@dataclass(frozen=True)
class PredimResult:
    """The three level-n roots, the selected one, and the threshold verdicts."""

    n: int
    B: object
    a1z: object
    s1: Enclosure
    s2: Enclosure
    s3: Enclosure
    sn: Enclosure
    branch: str
    thresholds: tuple
    flags: tuple = ()


@dataclass(frozen=True)
class SstarEstimate:
    """Window trajectory of the selected roots with running maxima.

    running_lo/running_hi are aligned with results; both are monotone
    nondecreasing.  No extrapolation beyond the window is attempted.
    """

    window: tuple
    results: tuple
    skipped: tuple = ()
    running_lo: tuple = ()
    running_hi: tuple = ()


def _weight(n, B, kind, a1z, s):
    return sums.WeightSpec(
        kind=_KINDS[kind], B=B, n=n, s=s, a1z=a1z if kind != 1 else None
    )


def _lambda_est(n: int, s: float, M) -> float:
    if n == 1:
        if M is None:
            return float(mpmath.zeta(2.0 * s))
        k = np.arange(1, M + 1, dtype=np.float64)
        return float(np.sum(k ** (-2.0 * s)))
    return sums.lambda_estimate(n, s, alphabet_max=M)


def _log_f_est(n, B, kind, a1z, M, s: float) -> float:
    logB = math.log(B)
    if kind == 1:
        c = -n * s * s * logB
    elif kind == 2:
        c = (1.0 - s) * math.log(a1z) - n * s * logB
    else:
        c = -s * math.log(a1z) - 0.5 * n * s * logB
    return c + math.log(_lambda_est(n, s, M))


def _f_enclosure(n, B, kind, a1z, M, s: float, level: int) -> Enclosure:
    w = _weight(n, B, kind, a1z, s)
    if M is None:
        lam = (
            sums.zeta_enclosure(s, 4096)
            if n == 1
            else sums.lambda_enclosure(n, s, level=level)
        )
    else:
        lam = sums.lambda_enclosure(n, s, alphabet_max=M, level=level)
    return rd.mul(sums.weight_enclosure(w), lam)


def _certify_bracket(n, B, kind, a1z, M, r_hat, delta, levels):
    for level in levels:
        r = r_hat
        for _ in range(8):
            lo = max(r - delta, LEFT_EDGE)
            hi = min(r + delta, 1.0)
            f_lo = _f_enclosure(n, B, kind, a1z, M, lo, level)
            f_hi = _f_enclosure(n, B, kind, a1z, M, hi, level)
            if f_lo.certified_ge(1) and f_hi.certified_le(1):
                return rd.from_f64(lo, hi)
            if f_lo.certified_lt(1):
                if lo <= LEFT_EDGE:
                    raise NoRoot(
                        f"sum already below 1 at s = {LEFT_EDGE} "
                        f"(n={n}, kind={kind}, M={M}): no root in the domain"
                    )
                r -= delta
                continue
            if f_hi.certified_gt(1):
                if hi >= 1.0:
                    raise NoRootInUnitInterval(
                        f"sum at s=1 is certified > 1 (n={n}, B={B}, kind={kind})"
                    )
                r += delta
                continue
            break  # endpoint enclosures straddle 1: need a sharper level
    raise PrecisionExhausted(
        f"cannot certify a width-{2 * delta:.2g} bracket at the sharpest level "
        f"(n={n}, kind={kind}); try a larger tol"
    )


def solve_predim(n: int, B, kind: int, a1z=None, *, M=None, tol: float = 1e-4):
    """Certified enclosure of the level-n root for the given equation kind.

    kind 1 weights by B^(-n s^2); kind 2 by a1z^(1-s) B^(-n s); kind 3 by
    a1z^(-s) B^(-n s/2).  a1z = +inf short-circuits to the conventional
    values [1,1] (kind 2) and [0,0] (kind 3).  M restricts the digit
    alphabet to {1..M}; M = None sums over all of N.
    """
    if kind not in (1, 2, 3):
        raise ValueError("kind must be 1, 2 or 3")
    if n < 1:
        raise ValueError("n must be >= 1")
    if Fraction(B) <= 1:
        raise ValueError("base B must exceed 1")
    if not 0 < tol <= 0.05:
        raise ValueError("tol must be in (0, 0.05]")
    if M is not None and M < 1:
        raise ValueError("alphabet cutoff M must be >= 1")
    if kind == 1:
        a1z = None
    else:
        if a1z is None:
            raise ValueError("kinds 2 and 3 need the first digit a1(z_n)")
        if a1z == math.inf:
            return enclose(1) if kind == 2 else enclose(0)
        a1z = int(a1z)
        if a1z < 1:
            raise ValueError("a1z must be a positive integer or +inf")

    levels = [0] if (n == 1 and M is None) else [1, 2, 3]

    if _log_f_est(n, B, kind, a1z, M, 1.0) >= -1e-9:
        # probably no root below 1; settle it with certified evaluations
        for level in levels:
            f1 = _f_enclosure(n, B, kind, a1z, M, 1.0, level)
            if f1.certified_gt(1):
                raise NoRootInUnitInterval(
                    f"sum at s=1 lies in [{f1.lo_float:.6g}, {f1.hi_float:.6g}], "
                    f"above 1 (n={n}, B={B}, kind={kind})"
                )
            if f1.certified_le(1):
                break
        else:
            raise PrecisionExhausted("sum enclosure at s=1 straddles 1 at every level")
    if _log_f_est(n, B, kind, a1z, M, LEFT_EDGE) <= 0.0:
        f_left = _f_enclosure(n, B, kind, a1z, M, LEFT_EDGE, levels[-1])
        if f_left.certified_lt(1):
            raise NoRoot(
                f"sum at s = {LEFT_EDGE} is below 1 (n={n}, kind={kind}, M={M})"
            )

    a, b = LEFT_EDGE, 1.0
    for _ in range(60):
        mid = 0.5 * (a + b)
        if _log_f_est(n, B, kind, a1z, M, mid) > 0.0:
            a = mid
        else:
            b = mid
        if b - a < 0.02 * tol:
            break
    return _certify_bracket(n, B, kind, a1z, M, 0.5 * (a + b), 0.45 * tol, levels)


def select_sn(s1: Enclosure, s2: Enclosure, s3: Enclosure, refine=None):
    """Pick the level root: s1 when s1 <= s2, else the interval max(s2, s3).

    The comparison must be certified on the enclosures; if they overlap,
    refine() (when given) is called once for tighter replacements before
    AmbiguousBranch is raised.
    """
    for round_ in (0, 1):
        if s1.hi <= s2.lo:
            return s1, CASE_S1
        if s1.lo > s2.hi:
            return rd.imax(s2, s3), CASE_MAX_S2_S3
        if refine is not None and round_ == 0:
            s1, s2, s3 = refine()
            continue
        break
    raise AmbiguousBranch(
        f"s1 = [{s1.lo_float:.8f}, {s1.hi_float:.8f}] and "
        f"s2 = [{s2.lo_float:.8f}, {s2.hi_float:.8f}] still overlap"
    )


def _tri_le(a: Enclosure, b: Enclosure):
    if a.hi <= b.lo:
        return True
    if a.lo > b.hi:
        return False
    return None


def _tri_lt(a: Enclosure, b: Enclosure):
    if a.hi < b.lo:
        return True
    if a.lo >= b.hi:
        return False
    return None


def _tri_not(v):
    return None if v is None else not v


def _tri_digit_ge(a1z, e: Enclosure):
    """a1z >= e, three-valued."""
    if a1z == math.inf:
        return True
    if e.certified_le(a1z):
        return True
    if e.certified_gt(a1z):
        return False
    return None


def _tri_digit_lt(a1z, e: Enclosure):
    if a1z == math.inf:
        return False
    if e.certified_gt(a1z):
        return True
    if e.certified_le(a1z):
        return False
    return None


def _implication(hyp, concl) -> str:
    if concl is True or hyp is False:
        return PASS
    if hyp is True and concl is False:
        return FAIL
    return INCONCLUSIVE


def threshold_check(result: PredimResult) -> tuple:
    """Four first-digit threshold implications, conservatively three-valued.

    (1) s1 <= s2 implies a1z >= B^(n s1);   (2) s1 > s2 implies a1z < B^(n s2);
    (3) s2 < s3 implies a1z < B^(n s3 / 2); (4) s2 >= s3 implies a1z >= B^(n s2 / 2).
    """
    n, B, a1z = result.n, result.B, result.a1z
    base = enclose(Fraction(B))

    def bpow(scale: Fraction, s: Enclosure) -> Enclosure:
        return rd.powr(base, rd.mul(enclose(scale), s))

    hyp12 = _tri_le(result.s1, result.s2)
    hyp3 = _tri_lt(result.s2, result.s3)
    return (
        _implication(hyp12, _tri_digit_ge(a1z, bpow(Fraction(n), result.s1))),
        _implication(_tri_not(hyp12), _tri_digit_lt(a1z, bpow(Fraction(n), result.s2))),
        _implication(hyp3, _tri_digit_lt(a1z, bpow(Fraction(n, 2), result.s3))),
        _implication(_tri_not(hyp3), _tri_digit_ge(a1z, bpow(Fraction(n, 2), result.s2))),
    )


def predim_result(n: int, B, a1z, *, M=None, tol: float = 1e-4) -> PredimResult:
    """Solve all three kinds at level n, select the branch, check thresholds.

    When an equation's sum exceeds 1 even at s = 1 the root is taken to be
    1 (the infimum convention) and a flag records which kind was clipped.
    """
    flags = []

    def solve(kind, solve_tol):
        try:
            return solve_predim(n, B, kind, a1z, M=M, tol=solve_tol)
        except NoRootInUnitInterval:
            flag = f"s{kind}_no_root_in_unit_interval"
            if flag not in flags:
                flags.append(flag)
            return enclose(1)

    s1 = solve(1, tol)
    s2 = solve(2, tol)
    s3 = solve(3, tol)

    def refine():
        fine = max(tol / 16.0, 1e-6)
        out = []
        for kind, current in ((1, s1), (2, s2), (3, s3)):
            try:
                out.append(solve(kind, fine))
            except CfshrinkError:
                out.append(current)
        return tuple(out)

    sn, branch = select_sn(s1, s2, s3, refine=refine)
    result = PredimResult(
        n=n, B=B, a1z=a1z, s1=s1, s2=s2, s3=s3, sn=sn, branch=branch,
        thresholds=(), flags=tuple(flags),
    )
    return PredimResult(
        n=n, B=B, a1z=a1z, s1=s1, s2=s2, s3=s3, sn=sn, branch=branch,
        thresholds=threshold_check(result), flags=tuple(flags),
    )


def sstar_estimate(
    target: TargetSpec, B, n_range, *, M=None, tol: float = 1e-4
) -> SstarEstimate:
    """Per-level roots across a window with running maxima of the selection.

    The window max is a surrogate only; nothing is extrapolated.  Levels
    whose computation fails are reported in skipped, not silently dropped.
    """
    ns = sorted({int(n) for n in n_range})
    if not ns or ns[0] < 1:
        raise ValueError("n_range must be a nonempty collection of levels >= 1")
    results, skipped, run_lo, run_hi = [], [], [], []
    best_lo = best_hi = -math.inf
    for n in ns:
        a1z = first_digit(target, n)
        try:
            res = predim_result(n, B, a1z, M=M, tol=tol)
        except CfshrinkError as err:
            skipped.append((n, f"{type(err).__name__}: {err}"))
            continue
        results.append(res)
        best_lo = max(best_lo, res.sn.lo_float)
        best_hi = max(best_hi, res.sn.hi_float)
        run_lo.append(best_lo)
        run_hi.append(best_hi)
    return SstarEstimate(
        window=(ns[0], ns[-1]),
        results=tuple(results),
        skipped=tuple(skipped),
        running_lo=tuple(run_lo),
        running_hi=tuple(run_hi),
    )


def f_m_iterate(m: int, s):
    """f_1(s) = s, f_{k+1}(s) = s f_k(s) / (1 - s + f_k(s)); exact on Fractions."""
    if m < 1:
        raise ValueError("m must be >= 1")
    f = s
    for _ in range(m - 1):
        f = s * f / (1 - s + f)
    return f


def em_dimension(m: int, B, *, M: int = 20, depth: int = 8, tol: float = 1e-3):
    """Certified bracket for the order-m set dimension at alphabet cutoff M.

    The defining pressure potential carries the constant -f_m(s) log B;
    m = 2 gives the quadratic-exponent potential, m = 1 the linear one
    with zero growth rate.  Cross-checks the level-root trajectory.
    """
    from . import pressure

    if m == 1:
        res = pressure.pressure_root(
            pressure.PHI2, B, 0.0, range(1, M + 1), depth=depth, tol=tol
        )
    elif m == 2:
        res = pressure.pressure_root(
            pressure.PHI1, B, None, range(1, M + 1), depth=depth, tol=tol
        )
    else:
        raise ValueError("only m in {1, 2} is wired to the dimension pipeline")
    return res.certified_bracket
