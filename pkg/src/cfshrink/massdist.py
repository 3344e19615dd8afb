"""Lower-bound witnesses: fundamental intervals, block measures, ball bounds.

The construction lives inside one root cylinder I_k(u).  The word is padded
to u~ = (u, 1^ell0), extended by m blocks of length ell over {1..M}, and
closed with one more digit: an even integer from a short window (first and
second families) or the target's own first digit (third family).  Inside
every resulting (n+1)-cylinder the level-n hit set carves out one interval,
the fundamental interval.  Block weights are a product measure tuned so the
per-block sum is exactly 1 at the finite-alphabet exponent s(ell, M); the
closing digit is weighted uniformly by exact count.

Endpoints and weights are rationals (quadratic endpoints are shaved inward
by a 192-bit enclosure), so distances, cylinder masses and ball masses all
evaluate exactly; only t-power comparisons go through directed rounding.
"""

import math
import random
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iter_product

from . import rounding as rd
from .cf_core import Word, continuants, cylinder
from .errors import BudgetExceeded, NoRoot, PrecisionExhausted
from .rounding import Enclosure, enclose
from .shrink import extremal_interval, membership
from .surd import Quad, quad_to_enclosure, sqrt_value
from .targets import TargetSpec, first_digit, z_value

CASE_I = "I"
CASE_II = "II"
CASE_III = "III"
_CASES = (CASE_I, CASE_II, CASE_III)

SHAVE_PREC = 192
RATIO_PREC = 96


def _vsign(v):
    if isinstance(v, Quad):
        return v.sign()
    return (v > 0) - (v < 0)


def _mpf_fraction(x) -> Fraction:
    """Exact rational value of an mpf bound."""
    man, exp = int(x.man), int(x.exp)
    if man == 0:
        return Fraction(0)
    f = Fraction(man) * Fraction(2) ** exp
    return -f if x < 0 else f


def _inside_fraction(v, side):
    """Rational point certainly on the inner side of the exact endpoint v.

    side "lo": result >= v (left endpoint moves right); side "hi": <= v.
    Returns (fraction, was_exact).
    """
    if isinstance(v, Fraction):
        return v, True
    e = quad_to_enclosure(v, SHAVE_PREC)
    if side == "lo":
        return _mpf_fraction(e.hi), False
    return _mpf_fraction(e.lo), False


def _approx(v) -> float:
    return float(v) if isinstance(v, Fraction) else quad_to_enclosure(v, 64).mid_float


def _block_words(ell: int, M: int):
    return tuple(iter_product(range(1, M + 1), repeat=ell))


def _q_of(w: Word) -> int:
    return continuants(w).q(len(w))


# -- the finite-alphabet exponent s(ell, M) ----------------------------------


def _certified_sign(diff: Enclosure, what: str) -> int:
    if diff.certified_gt(0):
        return 1
    if diff.certified_lt(0):
        return -1
    raise PrecisionExhausted(f"sign of {what} undecidable at working precision")


def _sum_at(case, ell, M, B, rate, s: Fraction, qcounts, prec) -> Enclosure:
    # common per-word factor pulled out of the q-sum
    if case == CASE_I:
        common = rd.powr(enclose(B, prec), -ell * s * s, prec)
    elif case == CASE_II:
        common = rd.mul(
            rd.exp_(enclose(rate * ell * (1 - s), prec), prec),
            rd.powr(enclose(B, prec), -ell * s, prec),
            prec,
        )
    else:
        common = rd.mul(
            rd.exp_(enclose(-rate * ell * s, prec), prec),
            rd.powr(enclose(B, prec), -ell * s / 2, prec),
            prec,
        )
    head = rd.sum_enclosures(
        (
            rd.mul(enclose(cnt, prec), rd.powr(enclose(q, prec), -2 * s, prec), prec)
            for q, cnt in qcounts
        ),
        prec,
    )
    return rd.mul(common, head, prec)


def _solve_bracket(case, ell, M, B, rate, tol=Fraction(1, 10**13), budget=1_000_000):
    if case not in _CASES:
        raise ValueError(f"case must be one of {_CASES}, got {case!r}")
    if ell < 1 or M < 1:
        raise ValueError("ell and M must be positive")
    if B < 2:
        raise ValueError("B must be an integer >= 2")
    if case != CASE_I:
        if rate is None:
            raise ValueError("cases II/III need a growth rate")
        rate = Fraction(rate)
    elif rate is not None:
        raise ValueError("case I takes no growth rate")
    if M**ell > budget:
        raise BudgetExceeded(f"alphabet {{1..{M}}}^{ell} exceeds budget {budget}")
    qcounts = tuple(Counter(_q_of(a) for a in _block_words(ell, M)).items())

    def fsign(s: Fraction) -> int:
        for prec in (128, 256, 512):
            diff = rd.sub(_sum_at(case, ell, M, B, rate, s, qcounts, prec), enclose(1), prec)
            try:
                return _certified_sign(diff, f"defining sum at s={float(s):.17g}")
            except PrecisionExhausted:
                continue
        raise PrecisionExhausted(f"defining sum straddles 1 at s={float(s):.17g}")

    lo, hi = Fraction(1, 2**20), Fraction(1)
    if fsign(lo) < 0:
        raise NoRoot(
            f"defining sum never reaches 1 on (0, 1] for case {case}, "
            f"ell={ell}, M={M}; enlarge the alphabet"
        )
    if fsign(hi) > 0:
        raise NoRoot(f"defining sum still exceeds 1 at s=1 (case {case}, ell={ell}, M={M})")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if fsign(mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def solve_finite_s(case, ell, M, B, rate=None, *, tol=Fraction(1, 10**13), budget=1_000_000):
    """Root s of the finite-alphabet defining sum, to within tol.

    Case I solves sum q^(-2s) B^(-ell s^2) = 1 over {1..M}^ell; case II
    weighs each word by e^(rate ell (1-s)) B^(-ell s), case III by
    e^(-rate ell s) B^(-ell s / 2).  The sum is strictly decreasing in s,
    so certified-sign bisection brackets the root; the midpoint is returned.
    """
    lo, hi = _solve_bracket(case, ell, M, B, rate, tol=Fraction(tol), budget=budget)
    return float((lo + hi) / 2)


# -- parameters ---------------------------------------------------------------


@dataclass(frozen=True)
class WitnessParams:
    """Shape of one witness construction, with the regime checks applied.

    n - k = m*ell + ell0 always; the analytic regime constraints (lower
    bounds on ell and m, s > t + eps, the exponent and window inequalities)
    are enforced on construction unless relax=True, which is meant for
    exploratory instances where only the exact geometric checks matter.
    """

    case: str
    k: int
    u: Word
    ell: int
    M: int
    n: int
    B: int
    spec: TargetSpec
    t: Fraction
    eps: Fraction
    rate: object = None
    relax: bool = False
    m: int = field(init=False)
    ell0: int = field(init=False)
    u_tilde: Word = field(init=False)
    s: float = field(init=False)
    s_lo: Fraction = field(init=False)
    s_hi: Fraction = field(init=False)

    def __post_init__(self):
        put = lambda k_, v: object.__setattr__(self, k_, v)
        if self.case not in _CASES:
            raise ValueError(f"case must be one of {_CASES}, got {self.case!r}")
        put("u", tuple(self.u))
        if any(not isinstance(a, int) or a < 1 for a in self.u):
            raise ValueError("root word digits must be integers >= 1")
        if self.k != len(self.u):
            raise ValueError(f"k={self.k} but u has {len(self.u)} digits")
        if not (isinstance(self.B, int) and self.B >= 2):
            raise ValueError("B must be an integer >= 2")
        put("t", Fraction(self.t))
        put("eps", Fraction(self.eps))
        if not (0 < self.t < 1):
            raise ValueError("t must lie in (0, 1)")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.n <= self.k:
            raise ValueError("n must exceed k")
        put("m", (self.n - self.k) // self.ell)
        put("ell0", (self.n - self.k) % self.ell)
        if self.m < 1:
            raise ValueError("need at least one block: n - k >= ell")
        put("u_tilde", self.u + (1,) * self.ell0)
        rate = self.rate
        if self.case == CASE_I:
            if rate is not None:
                raise ValueError("case I takes no growth rate")
        else:
            a1 = first_digit(self.spec, self.n)
            if not isinstance(a1, int):
                raise ValueError("cases II/III need a finite a1(z_n)")
            if rate is None:
                rate = Fraction(math.log(a1)) / self.n
            put("rate", Fraction(rate))
        s_lo, s_hi = _solve_bracket(self.case, self.ell, self.M, self.B, self.rate)
        put("s_lo", s_lo)
        put("s_hi", s_hi)
        put("s", float((s_lo + s_hi) / 2))
        errs = self._regime_errors()
        if errs and not self.relax:
            raise ValueError("; ".join(errs) + " (set relax=True to explore anyway)")

    def _regime_errors(self):
        errs = []
        p = self
        if p.case == CASE_I:
            if not (p.ell > 2 * p.t / p.eps + 1):
                errs.append(f"ell={p.ell} must exceed 2t/eps + 1 = {float(2*p.t/p.eps+1):.6g}")
            logb4 = rd.div(rd.log_(enclose(4)), rd.log_(enclose(p.B)))
            if not rd.div(logb4, enclose(p.eps)).certified_lt(p.ell):
                errs.append(f"ell={p.ell} must exceed log_B(4)/eps")
            if p.m * p.eps < p.k * p.t:
                errs.append(f"m={p.m} must be at least k t/eps = {float(p.k*p.t/p.eps):.6g}")
            if p.m * p.ell * p.s_lo**2 < p.n * p.t**2:
                errs.append("exponent inequality m ell s^2 >= n t^2 fails")
        else:
            if not (p.ell >= 2 * p.t / p.eps + 1):
                errs.append(f"ell={p.ell} must be at least 2t/eps + 1 = {float(2*p.t/p.eps+1):.6g}")
            if not (p.n * (1 - p.eps) <= p.m * p.ell <= p.n):
                errs.append("window inequality n(1 - eps) <= m ell <= n fails")
            a1 = first_digit(p.spec, p.n)
            lo_e = rd.exp_(enclose(p.n * (p.rate - p.eps)))
            hi_e = rd.exp_(enclose(p.n * (p.rate + p.eps)))
            if not (lo_e.certified_le(a1) and hi_e.certified_ge(a1)):
                errs.append("a1(z_n) falls outside the e^(n(rate -+ eps)) window")
            if p.case == CASE_II:
                # block weight <= q^(-2s) needs e^(rate(1-s)) <= B^s
                lhs = rd.exp_(enclose(p.rate * (1 - p.s_lo)))
                rhs = rd.powr(enclose(p.B), p.s_lo)
                if not rd.sub(rhs, lhs).certified_ge(0):
                    errs.append("regime inequality e^(rate(1-s)) <= B^s fails")
        if not (p.s_lo > p.t + p.eps):
            errs.append(f"s(ell, M) = {p.s:.6g} must exceed t + eps = {float(p.t+p.eps):.6g}")
        return errs


# -- fundamental intervals -----------------------------------------------------


@dataclass(frozen=True)
class FundamentalInterval:
    """One interval inside F_n and its (n+1)-cylinder, rational endpoints."""

    word: Word
    blocks: tuple
    last: int
    lo: Fraction
    hi: Fraction
    exact_endpoints: bool

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def address(self):
        return self.blocks + (self.last,)

    def parent_cylinder(self):
        return cylinder(self.word)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


def _last_entries(params: WitnessParams):
    p = params
    if p.case == CASE_I:
        e = rd.powr(enclose(p.B), p.n * p.t)
        lo_v, hi_v = _mpf_fraction(e.hi), 2 * _mpf_fraction(e.lo)
        what = "[B^(nt), 2 B^(nt)]"
    elif p.case == CASE_II:
        e = rd.exp_(enclose(p.n * (p.rate + p.eps)))
        lo_v, hi_v = 2 * _mpf_fraction(e.hi), 3 * _mpf_fraction(e.lo)
        what = "[2 e^(n(rate+eps)), 3 e^(n(rate+eps))]"
    else:
        return (first_digit(p.spec, p.n),)
    b = math.ceil(lo_v)
    b += b % 2
    top = math.floor(hi_v)
    top -= top % 2
    if b > top:
        raise ValueError(f"no even closing digit certified inside {what}")
    return tuple(range(b, top + 1, 2))


def _map_tail(word: Word, t0, t1):
    """x-interval of the tail range [t0, t1] inside the cylinder of word."""
    c = continuants(word)
    w = len(word)
    p1, q1 = c.p(w), c.q(w)
    p0, q0 = c.p(w - 1), c.q(w - 1)
    xa = (p1 + t0 * p0) / (q1 + t0 * q0)
    xb = (p1 + t1 * p0) / (q1 + t1 * q0)
    if w % 2 == 1:
        return xb, xa  # odd length: x decreases in the tail
    return xa, xb


def _core_interval(prefix: Word, last: int, params: WitnessParams):
    """Conservative sub-interval of the hit set, no extremal solving."""
    p = params
    z, a1, tz = z_value(p.spec, p.n)
    Bn = p.B**p.n
    if a1 is math.inf:
        t0, t1 = Fraction(0), Fraction(last, 2 * Bn)
    elif last == a1:
        R = sqrt_value(Fraction(1, Bn)) * a1 / 2
        t0 = tz - R if _vsign(tz - R) > 0 else Fraction(0)
        t1 = tz + R if _vsign(tz + R - 1) < 0 else Fraction(1)
    else:
        d = abs(a1 - last)
        if d == 1:
            raise ValueError(
                "guaranteed core needs |a1(z_n) - last| >= 2; keep exact solving on"
            )
        R = Fraction(a1 * last, 2 * d * Bn)
        t0 = tz - R if _vsign(tz - R) > 0 else Fraction(0)
        t1 = tz + R if _vsign(tz + R - 1) < 0 else Fraction(1)
    return _map_tail(prefix + (last,), t0, t1)


def _carve(prefix: Word, last: int, params: WitnessParams, exact: bool):
    if exact:
        pieces = extremal_interval(prefix, last, params.spec, params.B, params.n)
        if not pieces:
            raise RuntimeError(f"hit set empty inside cylinder {prefix + (last,)}")
        best = max(pieces, key=lambda pc: _approx(pc.x_hi) - _approx(pc.x_lo))
        x_lo, x_hi = best.x_lo, best.x_hi
    else:
        x_lo, x_hi = _core_interval(prefix, last, params)
    lo, ok_lo = _inside_fraction(x_lo, "lo")
    hi, ok_hi = _inside_fraction(x_hi, "hi")
    if lo >= hi:
        raise RuntimeError(f"degenerate fundamental interval at {prefix + (last,)}")
    return lo, hi, ok_lo and ok_hi


def _floor_enclosure(params: WitnessParams, qn: int, last: int) -> Enclosure:
    p = params
    if p.case == CASE_I:
        den = rd.mul(enclose(32 * qn * qn), rd.powr(enclose(p.B), p.n * (1 + p.t)))
    elif p.case == CASE_II:
        den = rd.mul(
            enclose(48 * qn * qn * last * p.B**p.n),
            rd.exp_(enclose(2 * p.n * p.eps)),
        )
    else:
        half = sqrt_value(Fraction(1, p.B**p.n))
        root = enclose(half) if isinstance(half, Fraction) else quad_to_enclosure(half, 128)
        return rd.div(root, enclose(4 * qn * qn * last))
    return rd.div(enclose(1), den)


def enumerate_fundamental(params: WitnessParams, *, exact=True, budget=20_000):
    """All fundamental intervals of the family, sorted left to right.

    Endpoints come from exact extremal solving on each (n+1)-cylinder by
    default; exact=False substitutes the guaranteed inner interval from the
    hit-set length bounds.  Every interval is checked against its case's
    length floor.
    """
    p = params
    lasts = _last_entries(p)
    blocks = _block_words(p.ell, p.M)
    total = len(blocks) ** p.m * len(lasts)
    if total > budget:
        raise BudgetExceeded(f"{total} fundamental intervals exceed budget {budget}")
    out = []
    for combo in iter_product(blocks, repeat=p.m):
        prefix = p.u_tilde + tuple(d for blk in combo for d in blk)
        qn = continuants(prefix).q(p.n)
        for last in lasts:
            lo, hi, was_exact = _carve(prefix, last, p, exact)
            floor = _floor_enclosure(p, qn, last)
            if not floor.certified_le(hi - lo):
                raise RuntimeError(
                    f"interval at {prefix + (last,)} misses its length floor "
                    f"({float(hi - lo):.3g} vs {floor.hi_float:.3g})"
                )
            out.append(
                FundamentalInterval(prefix + (last,), combo, last, lo, hi, was_exact)
            )
    out.sort(key=lambda F: F.lo)
    for a, b in zip(out, out[1:]):
        if a.hi >= b.lo:
            raise RuntimeError(f"overlapping intervals at {a.word} and {b.word}")
    return out


def membership_spotcheck(intervals, params: WitnessParams, points: int = 10):
    """Exact membership at equally spaced interior rationals; count checked."""
    failures = []
    for F in intervals:
        step = F.length / (points + 1)
        for j in range(1, points + 1):
            x = F.lo + j * step
            if not membership(x, params.spec, params.B, params.n):
                failures.append((F.address, x))
    return SpotcheckReport(len(intervals) * points, tuple(failures), _verdict(failures))


def _verdict(failures) -> str:
    return "PASS" if not failures else "FAIL"


@dataclass(frozen=True)
class SpotcheckReport:
    checked: int
    failures: tuple
    verdict: str


# -- the measure ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WitnessMeasure:
    """Product measure on the fundamental intervals, total mass exactly 1.

    Block weights are the defining-sum terms at the bracketed s, normalized
    by their exact rational sum; the closing digit is weighted 1/count.
    nominal_last_total records what the per-digit convention (2/B^(nt),
    2/e^(n(rate+eps)), or 1) would sum to instead.
    """

    params: WitnessParams
    intervals: tuple
    block_weights: dict
    last_weights: dict
    block_sum_residual: float
    nominal_last_total: float
    los: tuple = field(init=False)
    his: tuple = field(init=False)
    masses: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "los", tuple(F.lo for F in self.intervals))
        object.__setattr__(self, "his", tuple(F.hi for F in self.intervals))
        object.__setattr__(
            self, "masses", tuple(self.interval_mass(F) for F in self.intervals)
        )

    def weight(self, blocks, last=None) -> Fraction:
        w = Fraction(1)
        for a in blocks:
            w *= self.block_weights[tuple(a)]
        if last is not None:
            w *= self.last_weights[last]
        return w

    def interval_mass(self, F: FundamentalInterval) -> Fraction:
        return self.weight(F.blocks, F.last)

    @property
    def root_length(self) -> Fraction:
        return cylinder(self.params.u_tilde).length

    @property
    def total_mass(self) -> Fraction:
        return sum(self.masses, Fraction(0))

    def min_gap(self) -> Fraction:
        gaps = [b - a for a, b in zip(self.his, self.los[1:])]
        return min(gaps) if gaps else self.root_length


def _raw_block_weight(params: WitnessParams, q: int) -> Fraction:
    p = params
    s = (p.s_lo + p.s_hi) / 2
    if p.case == CASE_I:
        extra = rd.powr(enclose(p.B), -p.ell * s * s)
    elif p.case == CASE_II:
        extra = rd.mul(
            rd.exp_(enclose(p.rate * p.ell * (1 - s))),
            rd.powr(enclose(p.B), -p.ell * s),
        )
    else:
        extra = rd.mul(
            rd.exp_(enclose(-p.rate * p.ell * s)),
            rd.powr(enclose(p.B), -p.ell * s / 2),
        )
    return Fraction(rd.mul(rd.powr(enclose(q), -2 * s), extra).mid_float)


def build_witness(params: WitnessParams, *, exact=True, budget=20_000) -> WitnessMeasure:
    """Enumerate the family and attach the normalized product measure."""
    intervals = tuple(enumerate_fundamental(params, exact=exact, budget=budget))
    raw = {a: _raw_block_weight(params, _q_of(a)) for a in _block_words(params.ell, params.M)}
    total = sum(raw.values())
    block_weights = {a: w / total for a, w in raw.items()}
    lasts = sorted({F.last for F in intervals})
    last_weights = {b: Fraction(1, len(lasts)) for b in lasts}
    p = params
    if p.case == CASE_I:
        per = rd.div(enclose(2), rd.powr(enclose(p.B), p.n * p.t)).mid_float
    elif p.case == CASE_II:
        per = rd.div(enclose(2), rd.exp_(enclose(p.n * (p.rate + p.eps)))).mid_float
    else:
        per = 1.0
    return WitnessMeasure(
        params,
        intervals,
        block_weights,
        last_weights,
        float(abs(total - 1)),
        per * len(lasts),
    )


@dataclass(frozen=True)
class Ball:
    x: Fraction
    r: Fraction


def measure_of(query, witness: WitnessMeasure) -> Fraction:
    """Exact mass of a block-cylinder address or of a ball.

    An address is a tuple of blocks, optionally closed by the last digit:
    ((1,2), (2,1)) is the cylinder after two blocks, ((1,2), (2,1), 4) the
    fundamental interval.  A Ball(x, r) integrates the uniform densities
    over [x - r, x + r].
    """
    if isinstance(query, Ball):
        x, r = Fraction(query.x), Fraction(query.r)
        if r <= 0:
            raise ValueError("ball radius must be positive")
        return _ball_mass(witness, x, r)
    blocks = []
    last = None
    for i, part in enumerate(query):
        if isinstance(part, int):
            if i != len(query) - 1:
                raise ValueError("only the final address entry may be a digit")
            last = part
        else:
            blocks.append(tuple(part))
    if len(blocks) > witness.params.m:
        raise ValueError(f"address has more than m={witness.params.m} blocks")
    if last is not None and len(blocks) != witness.params.m:
        raise ValueError("closing digit needs all m blocks")
    return witness.weight(blocks, last)


def _ball_mass(w: WitnessMeasure, x: Fraction, r: Fraction) -> Fraction:
    lo, hi = x - r, x + r
    i = bisect_left(w.his, lo)
    mass = Fraction(0)
    while i < len(w.los) and w.los[i] < hi:
        a = w.los[i] if w.los[i] > lo else lo
        b = w.his[i] if w.his[i] < hi else hi
        if b > a:
            mass += w.masses[i] * (b - a) / (w.his[i] - w.los[i])
        i += 1
    return mass


# -- gap lemma -------------------------------------------------------------------


@dataclass(frozen=True)
class GapReport:
    pairs: int
    block_pairs: int
    last_pairs: int
    min_margin: object
    worst: object
    failures: tuple
    verdict: str


def gap_check(intervals, params: WitnessParams) -> GapReport:
    """Exact pairwise distances against the separation lemma's floors.

    Pairs differing first in block p must sit |I_(k+ell0+p*ell)| / (2(M+2)^4)
    apart; pairs differing only in the closing digit get |I_(n+1)| / 32
    (first family) or / 18 (second).  The cylinder floor is evaluated for
    both members and the larger one is required.
    """
    p = params
    const4 = 2 * (p.M + 2) ** 4
    last_div = 32 if p.case == CASE_I else 18
    lengths = {}

    def cyl_len(word):
        if word not in lengths:
            lengths[word] = cylinder(word).length
        return lengths[word]

    ordered = sorted(intervals, key=lambda F: F.lo)
    failures = []
    min_margin = None
    worst = None
    block_pairs = last_pairs = 0
    for i, A in enumerate(ordered):
        for Bv in ordered[i + 1 :]:
            dist = Bv.lo - A.hi
            diff_p = next(
                (j for j, (a, b) in enumerate(zip(A.blocks, Bv.blocks)) if a != b), None
            )
            if diff_p is None:
                if A.last == Bv.last:
                    raise RuntimeError(f"duplicate address {A.address}")
                if p.case == CASE_III:
                    raise RuntimeError("case III admits a single closing digit")
                last_pairs += 1
                required = max(cyl_len(A.word), cyl_len(Bv.word)) / last_div
            else:
                block_pairs += 1
                required = (
                    max(
                        cyl_len(p.u_tilde + sum(A.blocks[: diff_p + 1], ())),
                        cyl_len(p.u_tilde + sum(Bv.blocks[: diff_p + 1], ())),
                    )
                    / const4
                )
            margin = dist / required
            if min_margin is None or margin < min_margin:
                min_margin, worst = margin, (A.address, Bv.address)
            if dist < required:
                failures.append((A.address, Bv.address, dist, required))
    return GapReport(
        block_pairs + last_pairs,
        block_pairs,
        last_pairs,
        min_margin,
        worst,
        tuple(failures),
        _verdict(failures),
    )


# -- mass lemma -------------------------------------------------------------------


@dataclass(frozen=True)
class MassBoundsReport:
    cylinders: int
    fundamentals: int
    max_cylinder_ratio: float
    max_fundamental_ratio: float
    cylinder_limit: object
    fundamental_limit: object
    failures: tuple
    verdict: str


def mass_bounds_check(witness: WitnessMeasure, *, prec=RATIO_PREC) -> MassBoundsReport:
    """Mass-lemma inequalities on every enumerated address.

    Block-cylinder masses are compared with q^(-2t) / |I_(k+ell0)(u~)|^t and
    fundamental-interval masses with 64 |F|^t / |I_(k+ell0)(u~)|^t.  Where
    the constant is left implicit (second and third families' interval
    bound), the ratio is only reported, not thresholded.
    """
    p = witness.params
    t = p.t
    L0t = rd.powr(enclose(witness.root_length), t, prec)
    cyl_limit = 1
    fund_limit = 64 if p.case == CASE_I else None
    failures = []
    max_cyl = 0.0
    cylinders = 0
    blocks = _block_words(p.ell, p.M)
    for depth in range(p.m + 1):
        for combo in iter_product(blocks, repeat=depth):
            cylinders += 1
            word = p.u_tilde + tuple(d for blk in combo for d in blk)
            mass = witness.weight(combo)
            q = continuants(word).q(len(word))
            ratio = rd.mul(
                rd.mul(enclose(mass), rd.powr(enclose(q), 2 * t, prec), prec), L0t, prec
            )
            max_cyl = max(max_cyl, ratio.hi_float)
            if not ratio.certified_le(cyl_limit):
                failures.append(("cylinder", combo, ratio.hi_float))
    max_fund = 0.0
    for F in witness.intervals:
        mass = witness.interval_mass(F)
        ratio = rd.mul(
            enclose(mass), rd.powr(enclose(witness.root_length / F.length), t, prec), prec
        )
        max_fund = max(max_fund, ratio.hi_float)
        if fund_limit is not None and not ratio.certified_le(fund_limit):
            failures.append(("fundamental", F.address, ratio.hi_float))
    return MassBoundsReport(
        cylinders,
        len(witness.intervals),
        max_cyl,
        max_fund,
        cyl_limit,
        fund_limit,
        tuple(failures),
        _verdict(failures),
    )


# -- ball bound -------------------------------------------------------------------


@dataclass(frozen=True)
class HolderReport:
    samples: int
    limit: int
    max_ratio: float
    argmax: object
    big_samples: int
    big_max: float
    fine_samples: int
    fine_max: float
    failures: tuple
    verdict: str
    fine_verdict: str


def holder_limit(params: WitnessParams) -> int:
    return 16 * (params.M + 2) ** 4 * (params.M + 1) ** (2 * params.ell)


def holder_samples(witness: WitnessMeasure, count: int, seed: int):
    """Stratified (x, r) pairs covering every radius regime of the ball lemma.

    Radii are drawn per band: above the root cylinder length, the block
    windows |I_(k+ell0+p*ell)| / (2(M+2)^4), the closing-digit window, and
    below half the smallest gap.  Centers mix interval interiors, edges,
    gaps between intervals, and points far from the support.
    """
    p = witness.params
    rng = random.Random(seed)
    const4 = 2 * (p.M + 2) ** 4
    L0 = witness.root_length
    min_gap = witness.min_gap()
    last_div = {CASE_I: 32, CASE_II: 18, CASE_III: const4}[p.case]
    bands_of = {}
    for F in witness.intervals:
        key = F.blocks
        if key not in bands_of:
            tops = [L0]
            for depth in range(1, p.m + 1):
                word = p.u_tilde + tuple(d for blk in F.blocks[:depth] for d in blk)
                tops.append(cylinder(word).length / const4)
            bands = [(L0, 2 * L0)]
            for a, b in zip(tops[1:], tops):
                bands.append((a, b))
            low = cylinder(F.word).length / last_div
            bands.append((low, tops[-1]))
            bands.append((low / 10, low))
            bands.append((min_gap / 20, min_gap / 2))
            bands_of[key] = bands
    frac = lambda: Fraction(rng.getrandbits(48) + 1, 2**48 + 2)
    out = []
    intervals = witness.intervals
    for _ in range(count):
        F = intervals[rng.randrange(len(intervals))]
        b_lo, b_hi = bands_of[F.blocks][rng.randrange(len(bands_of[F.blocks]))]
        r = b_lo + (b_hi - b_lo) * frac()
        roll = rng.random()
        if roll < 0.55:
            x = F.lo + F.length * frac()
        elif roll < 0.70:
            x = F.lo - r / 3 if rng.random() < 0.5 else F.hi + r / 3
        elif roll < 0.85 and len(intervals) > 1:
            j = rng.randrange(len(intervals) - 1)
            x = (intervals[j].hi + intervals[j + 1].lo) / 2
        else:
            x = frac()
        if x < 0:
            x = Fraction(0)
        if x > 1:
            x = Fraction(1)
        out.append((x, r))
    return out


def holder_check(witness: WitnessMeasure, samples, *, prec=RATIO_PREC) -> HolderReport:
    """Max of mass(B(x,r)) |I_(k+ell0)(u~)|^t / r^t over the samples.

    PASS needs every sample certified under 16 (M+2)^4 (M+1)^(2 ell).  The
    proof's sharper constant 128 is tracked separately on the fine regime
    (r at most half the smallest gap) and the trivial regime r >= |I_(k+ell0)|.
    """
    p = witness.params
    t = p.t
    L0 = witness.root_length
    limit = holder_limit(p)
    fine_at = witness.min_gap() / 2
    max_ratio, argmax = 0.0, None
    big_n = fine_n = 0
    big_max = fine_max = 0.0
    fine_ok = True
    failures = []
    for x, r in samples:
        x, r = Fraction(x), Fraction(r)
        mass = _ball_mass(witness, x, r)
        if mass == 0:
            hi = 0.0
        else:
            ratio = rd.mul(enclose(mass), rd.powr(enclose(L0 / r), t, prec), prec)
            hi = ratio.hi_float
            if not ratio.certified_le(limit):
                failures.append((x, r, hi))
        if hi > max_ratio:
            max_ratio, argmax = hi, (x, r)
        if r >= L0:
            big_n += 1
            big_max = max(big_max, hi)
        if r <= fine_at:
            fine_n += 1
            fine_max = max(fine_max, hi)
            if hi > 128:
                fine_ok = False
    return HolderReport(
        len(samples),
        limit,
        max_ratio,
        argmax,
        big_n,
        big_max,
        fine_n,
        fine_max,
        tuple(failures),
        _verdict(failures),
        "PASS" if fine_ok else "FAIL",
    )


# -- content bound -----------------------------------------------------------------


@dataclass(frozen=True)
class ContentReport:
    bound: Enclosure
    reference_floor: Fraction
    constant: int
    total_mass: Fraction
    verdict: str


def content_lower_bound(witness: WitnessMeasure, t=None, *, prec=128) -> ContentReport:
    """Hausdorff-content floor from the mass distribution principle.

    A measure of total mass mu with mass(B(x,r)) <= C r^t / |I|^t forces
    content >= mu |I|^t / C; the report compares that with the closed
    form |I_k(u)| / (2^(ell+8) (M+2)^4 (M+1)^(2 ell)).
    """
    p = witness.params
    t = p.t if t is None else Fraction(t)
    c = holder_limit(p)
    total = witness.total_mass
    bound = rd.mul(
        enclose(total),
        rd.div(rd.powr(enclose(witness.root_length), t, prec), enclose(c), prec),
        prec,
    )
    floor = cylinder(p.u).length / (
        2 ** (p.ell + 8) * (p.M + 2) ** 4 * (p.M + 1) ** (2 * p.ell)
    )
    verdict = "PASS" if bound.certified_ge(floor) else "FAIL"
    return ContentReport(bound, floor, c, total, verdict)


def dump_witness(witness: WitnessMeasure) -> str:
    """Audit dump: parameters, block weights, and every interval, exactly."""
    p = witness.params
    lines = [
        f"case={p.case} k={p.k} u={p.u} ell={p.ell} M={p.M} m={p.m} ell0={p.ell0} "
        f"n={p.n} B={p.B} t={p.t} eps={p.eps} s={p.s!r}",
        f"u_tilde={p.u_tilde} root_length={witness.root_length} "
        f"block_residual={witness.block_sum_residual:.3e} "
        f"nominal_last_total={witness.nominal_last_total:.6g}",
    ]
    for a, w in sorted(witness.block_weights.items()):
        lines.append(f"block {a} weight={w}")
    for b, w in sorted(witness.last_weights.items()):
        lines.append(f"last {b} weight={w}")
    for F in witness.intervals:
        lines.append(
            f"interval blocks={F.blocks} last={F.last} lo={F.lo} hi={F.hi} "
            f"mass={witness.interval_mass(F)} exact={F.exact_endpoints}"
        )
    return "\n".join(lines)
