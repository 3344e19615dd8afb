"""Level-n target hits: membership, the distance identity, J-intervals.

Membership at level n asks |T^n x - z_n| |T^{n+1} x - T z_n| < B^{-n}.
On an (n+1)-cylinder both orbit points are Moebius functions of the tail
t = T^{n+1} x, so the boundary condition is a rational quadratic in t:
the extremal sub-intervals solve in closed form with rational or
quadratic-surd endpoints, and every verdict here is exact (the supported
target families produce rational or surd values, never bare floats).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import rounding as rd
from . import sums
from .cf_core import Word, continuants, cylinder, eval_word, gauss_step
from .errors import AmbiguousBranch, ExponentTooSmall, Inapplicable
from .rounding import Enclosure, enclose
from .surd import Quad, quad_to_enclosure, sqrt_value
from .targets import TargetSpec, first_digit, z_value

FAR = "FAR"
ADJACENT = "ADJACENT"
EQUAL = "EQUAL"

BRANCH_S1 = "s1<=s2"
BRANCH_MAX = "s1>s2"


def _as_value(x):
    """Coerce x (number, Fraction, Quad, or digit word) to an exact point."""
    if isinstance(x, Quad):
        return x
    if isinstance(x, (tuple, list)):
        return eval_word(tuple(x))
    return Fraction(x)


def _sign(v) -> int:
    if isinstance(v, Quad):
        return v.sign()
    return (v > 0) - (v < 0)


def _floor_inv(x: Quad) -> int:
    """Exact floor(1/x) for a surd x in (0,1): float guess, surd-certified."""
    inv = 1 / x
    k = int(quad_to_enclosure(inv, 96).mid_float)
    while (inv - k).sign() < 0:
        k -= 1
    while (inv - (k + 1)).sign() >= 0:
        k += 1
    return k


def _gauss_any(x):
    """One Gauss step on a Fraction or Quad, exactly."""
    if isinstance(x, Quad):
        return 1 / x - _floor_inv(x)
    return gauss_step(x)


def _orbit(x, upto: int) -> list:
    """[x, Tx, ..., T^upto x] exactly."""
    if isinstance(x, Quad):
        if x.sign() < 0 or (x - 1).sign() >= 0:
            raise ValueError("orbit start must lie in [0, 1)")
    elif not 0 <= x < 1:
        raise ValueError("orbit start must lie in [0, 1)")
    pts = [x]
    for _ in range(upto):
        pts.append(_gauss_any(pts[-1]))
    return pts


def membership(x, spec: TargetSpec, B, n: int) -> bool:
    """Does x satisfy |T^n x - z_n| |T^{n+1} x - T z_n| < B^{-n}?

    x may be a rational (or quadratic surd, or a digit word); the verdict
    is exact in every case.
    """
    if n < 1:
        raise ValueError("level n must be >= 1")
    pts = _orbit(_as_value(x), n + 1)
    return _membership_at(pts[n], pts[n + 1], spec, B, n)


def _membership_at(tn, tn1, spec, B, n) -> bool:
    z, _, tz = z_value(spec, n)
    d1 = abs(tn - z)
    d2 = abs(tn1 - tz)
    prod = d1 * d2
    bound = Fraction(B) ** (-n)
    return _sign(prod - bound) < 0


@dataclass(frozen=True)
class HitReport:
    """Levels n <= horizon passing membership; inconclusive kept for shape.

    All supported inputs evaluate exactly, so `inconclusive` stays empty.
    """

    x: object
    B: object
    horizon: int
    hits: tuple
    inconclusive: tuple = ()


def hit_times(x, spec: TargetSpec, B, N: int) -> HitReport:
    """All levels n in 1..N where membership holds."""
    if N < 1:
        raise ValueError("horizon must be >= 1")
    x0 = _as_value(x)
    pts = _orbit(x0, N + 1)
    hits = tuple(
        n for n in range(1, N + 1) if _membership_at(pts[n], pts[n + 1], spec, B, n)
    )
    return HitReport(x=x0, B=B, horizon=N, hits=hits)


def identity_check(x, z, n: int):
    """|T^n x - z| and the quotient over (a_{n+1}(x)+T^{n+1}x)(a_1(z)+Tz).

    Both sides are exact rationals and must coincide; the quotient's
    numerator is |(a_1(z) - a_{n+1}(x)) + (Tz - T^{n+1}x)|.
    """
    x = Fraction(x)
    z = Fraction(z)
    if not 0 < z < 1:
        raise ValueError("z must lie in (0, 1)")
    if not 0 <= x < 1:
        raise ValueError("x must lie in [0, 1)")
    pts = _orbit(x, n + 1)
    tn, tn1 = pts[n], pts[n + 1]
    if tn == 0:
        raise ValueError(f"x has no digit at position {n + 1}; expansion too short")
    inv = 1 / tn
    an1 = inv.numerator // inv.denominator
    a1z = (1 / z).numerator // (1 / z).denominator
    tz = gauss_step(z)
    lhs = abs(tn - z)
    rhs = abs((a1z - an1) + (tz - tn1)) / ((an1 + tn1) * (a1z + tz))
    return lhs, rhs


# ---------------------------------------------------------------------------
# J-interval bounds

@dataclass(frozen=True)
class JIntervalBound:
    """Length bounds and tail-space cover of F_n inside one (n+1)-cylinder.

    upper_len bounds each emitted piece from above; lower_len bounds the
    guaranteed contained interval (0 in the two-piece adjacent case, where
    none is derived).  cover_ts are exact tail intervals whose Moebius
    images cover F_n within the cylinder.
    """

    prefix: Word
    next_digit: int
    case: str
    n: int
    B: object
    a1z: int
    upper_len: object
    lower_len: object
    pieces: int
    cover_ts: tuple
    degenerate: bool = False

    def cover_intervals(self) -> tuple:
        """Exact x-space cover pieces, each as an ordered (lo, hi) pair."""
        word = self.prefix + (self.next_digit,)
        return tuple(_map_piece(word, t0, t1) for (t0, t1) in self.cover_ts)


def _b_pow_half(B, n: int):
    """B^{-n/2} exactly: a Fraction when B^n is a square, else a Quad."""
    return sqrt_value(Fraction(1, Fraction(B) ** n))


def _clip_ball(center, radius) -> tuple:
    """[center - radius, center + radius] clipped to [0, 1], or None."""
    lo = center - radius
    hi = center + radius
    if _sign(lo) < 0:
        lo = Fraction(0)
    if _sign(hi - 1) > 0:
        hi = Fraction(1)
    if _sign(hi - lo) <= 0:
        return None
    return (lo, hi)


def j_interval_bounds(prefix: Word, a_next: int, spec: TargetSpec, B, n: int) -> JIntervalBound:
    """Case tag, length bounds and tail cover for F_n cap I_{n+1}(prefix, a_next)."""
    prefix = tuple(prefix)
    if len(prefix) != n or n < 1:
        raise ValueError("prefix length must equal the level n >= 1")
    if a_next < 1:
        raise ValueError("next digit must be a positive integer")
    a1z = first_digit(spec, n)
    if a1z == math.inf:
        raise Inapplicable("z_n = 0: the cover runs through the first branch, "
                           "no J-interval normal form exists")
    _, _, tz = z_value(spec, n)
    c = continuants(prefix)
    qn = c.q(n)
    q2 = qn * qn
    Bn = Fraction(B) ** n
    delta = abs(a1z - a_next)

    if delta == 0:
        half = _b_pow_half(B, n)
        upper = 2 * half / (q2 * a1z)
        lower = half / (4 * q2 * a1z)
        ball = _clip_ball(tz, 2 * a1z * half)
        return JIntervalBound(prefix, a_next, EQUAL, n, B, a1z, upper, lower,
                              1, (ball,) if ball else ())

    if delta == 1:
        radius = Fraction(8 * a1z * a_next) / Bn
        if 2 * radius >= 1:
            cyl = cylinder(prefix + (a_next,)).length
            return JIntervalBound(prefix, a_next, ADJACENT, n, B, a1z, cyl, cyl,
                                  1, ((Fraction(0), Fraction(1)),), degenerate=True)
        upper = Fraction(16 * a1z, q2 * a_next) / Bn
        ts = []
        ball = _clip_ball(tz, radius)
        if ball:
            ts.append(ball)
        left_end = tz - 1 + radius
        if left_end > 0:
            ts.append((Fraction(0), left_end))
        right_end = tz + 1 - radius
        if right_end < 1:
            ts.append((right_end, Fraction(1)))
        return JIntervalBound(prefix, a_next, ADJACENT, n, B, a1z, upper,
                              Fraction(0), len(ts), tuple(sorted(ts)))

    upper = Fraction(16 * a1z, q2 * a_next * delta) / Bn
    lower = Fraction(a1z, 16 * q2 * a_next * delta) / Bn
    radius = Fraction(8 * a1z * a_next, delta) / Bn
    ball = _clip_ball(tz, radius)
    return JIntervalBound(prefix, a_next, FAR, n, B, a1z, upper, lower,
                          1, (ball,) if ball else ())


# ---------------------------------------------------------------------------
# exact extremal pieces

@dataclass(frozen=True)
class ExtremalPiece:
    """One maximal tail interval where the membership product is <= B^{-n}.

    Endpoints are exact (Fraction or Quad); x endpoints are the Moebius
    images inside the (n+1)-cylinder, ordered x_lo <= x_hi.
    """

    t_lo: object
    t_hi: object
    x_lo: object
    x_hi: object

    def length_enclosure(self, prec: int = 128) -> Enclosure:
        return rd.sub(quad_to_enclosure(self.x_hi, prec),
                      quad_to_enclosure(self.x_lo, prec), prec)

    def contains_x(self, x) -> bool:
        x = Fraction(x)
        return _sign(x - self.x_lo) >= 0 and _sign(self.x_hi - x) >= 0


def _poly_le_zero(a2, a1, a0, u: Fraction, v: Fraction) -> list:
    """Solution of a2 t^2 + a1 t + a0 <= 0 on [u, v], exact endpoints."""
    if a2 == 0:
        if a1 == 0:
            return [(u, v)] if a0 <= 0 else []
        r = -Fraction(a0) / a1
        if a1 > 0:
            return [(u, min(v, r))] if r > u else []
        return [(max(u, r), v)] if r < v else []
    disc = Fraction(a1) * a1 - 4 * Fraction(a2) * a0
    if disc <= 0:
        return [] if a2 > 0 else [(u, v)]
    sq = sqrt_value(disc)
    r1 = (-a1 - sq) / (2 * a2)
    r2 = (-a1 + sq) / (2 * a2)
    if _sign(r2 - r1) < 0:
        r1, r2 = r2, r1
    out = []
    if a2 > 0:
        lo = u if _sign(r1 - u) < 0 else r1
        hi = v if _sign(r2 - v) > 0 else r2
        out.append((lo, hi))
    else:
        # opens downward: solution is the complement of (r1, r2)
        if _sign(r1 - u) > 0:
            out.append((u, v if _sign(r1 - v) > 0 else r1))
        if _sign(r2 - v) < 0:
            out.append((r2 if _sign(r2 - u) > 0 else u, v))
    return [(lo, hi) for (lo, hi) in out if _sign(hi - lo) > 0]


def _map_piece(word: Word, t0, t1) -> tuple:
    """Moebius image of a tail interval inside the cylinder of `word`."""
    c = continuants(word)
    m = len(word)
    p1, q1 = c.p(m), c.q(m)
    p0, q0 = c.p(m - 1), c.q(m - 1)
    xa = (p1 + t0 * p0) / (q1 + t0 * q0)
    xb = (p1 + t1 * p0) / (q1 + t1 * q0)
    if m % 2 == 1:
        return (xb, xa)  # odd length: x decreases in the tail
    return (xa, xb)


def extremal_interval(prefix: Word, a_next: int, spec: TargetSpec, B, n: int) -> tuple:
    """Exact maximal sub-intervals of the cylinder where membership holds.

    Solves |1/(a+t) - z| |t - Tz| <= B^{-n} for the tail t by splitting
    [0,1] at the factor sign changes; on each part the boundary is one
    rational quadratic.  Needs a rational target (surd targets get only
    enclosure verdicts, not closed forms).
    """
    prefix = tuple(prefix)
    if len(prefix) != n or n < 1:
        raise ValueError("prefix length must equal the level n >= 1")
    z, _, tz = z_value(spec, n)
    if isinstance(z, Quad) or isinstance(tz, Quad):
        raise ValueError("exact extremal solving needs a rational target value")
    a = a_next
    c = Fraction(B) ** (-n)

    pts = {Fraction(0), Fraction(1), tz}
    if z != 0:
        tstar = 1 / z - a
        if 0 < tstar < 1:
            pts.add(tstar)
    knots = sorted(p for p in pts if 0 <= p <= 1)

    t_pieces = []
    for u, v in zip(knots, knots[1:]):
        mid = (u + v) / 2
        s1 = _sign(1 - z * (a + mid))
        s2 = _sign(mid - tz)
        sigma = s1 * s2
        # sigma*(1 - z(a+t))(t - tz) - c(a+t) <= 0, coefficients in t
        a2 = -sigma * z
        a1 = sigma * (1 - z * a + z * tz) - c
        a0 = -sigma * (1 - z * a) * tz - c * a
        t_pieces.extend(_poly_le_zero(a2, a1, a0, u, v))

    merged = []
    for lo, hi in t_pieces:
        if merged:
            plo, phi = merged[-1]
            if isinstance(phi, Fraction) and isinstance(lo, Fraction) and phi == lo:
                merged[-1] = (plo, hi)
                continue
        merged.append((lo, hi))

    word = prefix + (a_next,)
    out = []
    for t0, t1 in merged:
        x_lo, x_hi = _map_piece(word, t0, t1)
        out.append(ExtremalPiece(t0, t1, x_lo, x_hi))
    return tuple(out)


# ---------------------------------------------------------------------------
# cover s-volumes

@dataclass(frozen=True)
class CoverReport:
    """Total cover s-volume at one level, with a per-piece breakdown.

    `total` and `parts` score the cover pieces at their collapsed weights
    (the per-digit sums evaluate to their comparability class, constants
    normalized away): that is the quantity whose decay/growth tracks the
    pre-dimensional root.  `bound_sums` keeps the raw per-digit sums of
    the J-bound upper lengths, constants and all, for inspection; their
    16^s-size prefactors shift the crossover level without moving it.
    """

    n: int
    B: object
    s: float
    branch: str
    a1z: object
    total: Enclosure
    parts: dict
    bound_sums: dict
    cutoff: int = 0


@dataclass(frozen=True)
class DecayReport:
    """Cover totals across levels with a fitted log2 slope."""

    reports: tuple
    side: str
    offset: float
    slope: float
    residual: float
    monotone_decreasing: bool
    monotone_nondecreasing: bool


def _pow_enc(base: Enclosure, s) -> Enclosure:
    return rd.powr(base, Fraction(s))


def _frac_pow(x: Fraction, s) -> Enclosure:
    return _pow_enc(enclose(x), s)


def _imin(a: Enclosure, b: Enclosure) -> Enclosure:
    return rd.neg(rd.imax(rd.neg(a), rd.neg(b)))


def _coef_pow(v, a: int, s) -> Enclosure:
    """(min(v, cylinder coefficient))^s; a piece never exceeds its cylinder.

    v bounds the piece length relative to q_n^{-2}; the (n+1)-cylinder with
    next digit a contributes at most 1/(a(a+1)) on the same scale.
    """
    cap = Fraction(1, a * (a + 1))
    if _sign(v - cap) > 0:
        v = cap
    return _pow_enc(quad_to_enclosure(v, 128), s)


def _bound_sums_b1(n, B, a1z, s, cutoff, Bn) -> dict:
    """Raw per-digit sums of the first-branch J-bound upper lengths."""
    head = enclose(0)
    for a in range(1, cutoff + 1):
        if a1z == math.inf:
            ratio = Fraction(1, a)  # a1z/|a1z - a| -> 1
        else:
            ratio = Fraction(a1z, a * abs(a1z - a))
        head = rd.add(head, _coef_pow(16 * ratio / Bn, a, s))
    return {"far_head": head}


def _bound_sums_b2(n, B, a1z, s, Bn) -> dict:
    """Raw per-digit sums of the second-branch J-bound upper lengths."""
    out = {"equal": _coef_pow(2 * _b_pow_half(B, n) / a1z, a1z, s)}
    adj = enclose(0)
    degen = enclose(0)
    for a in (a1z - 1, a1z + 1):
        if a < 1:
            continue
        if 8 * Fraction(a1z * a) / Bn >= Fraction(1, 2):
            # piece = whole cylinder; its length is q_n^{-2} times this bracket
            coef = rd.union(enclose(Fraction(1, (a + 1) * (a + 2))),
                            enclose(Fraction(1, a * (a + 1))))
            degen = rd.add(degen, _pow_enc(coef, s))
        else:
            adj = rd.add(adj, rd.mul(enclose(2),
                                     _coef_pow(Fraction(16 * a1z, a) / Bn, a, s)))
    out["adjacent"] = adj
    out["degenerate"] = degen

    far = enclose(0)
    head_to = max(4 * a1z, 256)
    for a in range(1, head_to + 1):
        d = abs(a1z - a)
        if d <= 1:
            continue
        far = rd.add(far, _coef_pow(Fraction(16 * a1z, a * d) / Bn, a, s))
    # tail: a > head_to has |a1z - a| >= a/2, so the capped terms stay
    # below min(32 a1z / B^n, 1)^s a^{-2s}; integrate the power tail
    sf = Fraction(s)
    tail_top = rd.mul(
        _frac_pow(min(32 * Fraction(a1z) / Bn, Fraction(1)), s),
        rd.div(_frac_pow(Fraction(head_to), 1 - 2 * s),
               enclose(2 * sf - 1)),
    )
    out["far"] = rd.add(far, rd.from_f64(0.0, tail_top.hi_float))
    return out


def cover_svolume(n: int, B, spec: TargetSpec, s: float, M=None, *,
                  predim=None, level: int = 1) -> CoverReport:
    """Certified s-volume of the level-n cover of F_n.

    The per-word factor q_n^{-2s} splits off, so every term is the
    continuant power sum times a per-digit coefficient sum.  `total`
    scores the pieces at collapsed weights: the digit sums replaced by
    their evaluated comparability class, so first branch B^{-n s s1} per
    word plus the truncation interval, second branch a1z^{1-s} B^{-ns}
    plus the a1z-digit piece a1z^{-s} B^{-ns/2}.  M truncates the outer
    word alphabet (None = full, certified envelope).
    """
    if s <= 0.51:
        raise ExponentTooSmall(f"cover sums need s > 1/2 + margin, got {s}")
    a1z = first_digit(spec, n)
    if predim is None:
        from . import predim as predim_mod

        predim = predim_mod.predim_result(n, B, a1z, M=M, tol=1e-3)
    lam = sums.lambda_enclosure(n, s, alphabet_max=M, level=level)
    Bn = Fraction(B) ** n
    Benc = enclose(Fraction(B))
    sf = Fraction(s)

    if predim.branch == "CASE_S1":
        branch = BRANCH_S1
        # truncation piece: one residual interval per word holds every
        # cylinder with a_{n+1} > B^{n s1}/2, length ~ B^{-n s1} q_n^{-2};
        # the kept digits sum to ~ B^{n s1 (1-s)} B^{-ns} per word
        trunc = rd.powr(Benc, rd.mul(enclose(-n * sf), predim.s1))
        far = rd.mul(rd.powr(Benc, rd.mul(enclose(n * (1 - sf)), predim.s1)),
                     _frac_pow(1 / Bn, s))
        cutoff = int(float(B) ** (n * predim.s1.hi_float) / 2)
        if a1z != math.inf and a1z <= cutoff:
            raise AmbiguousBranch(
                f"first branch needs a_1(z_n) > B^(n s1)/2, got {a1z} <= {cutoff}")
        parts = {"truncation": rd.mul(lam, trunc), "far": rd.mul(lam, far)}
        total = rd.add(parts["truncation"], parts["far"])
        bound = _bound_sums_b1(n, B, a1z, s, cutoff, Bn)
        return CoverReport(n, B, s, branch, a1z, total, parts,
                           {k: rd.mul(lam, v) for k, v in bound.items()}, cutoff)

    branch = BRANCH_MAX
    a1z = int(a1z)
    far = rd.mul(rd.powr(enclose(a1z), 1 - sf), _frac_pow(1 / Bn, s))
    eq = rd.mul(rd.powr(enclose(a1z), -sf),
                rd.powr(Benc, Fraction(-n, 2) * sf))
    parts = {"far": rd.mul(lam, far), "equal": rd.mul(lam, eq)}
    total = rd.add(parts["far"], parts["equal"])
    bound = _bound_sums_b2(n, B, a1z, s, Bn)
    return CoverReport(n, B, s, branch, a1z, total, parts,
                       {k: rd.mul(lam, v) for k, v in bound.items()},
                       max(4 * a1z, 256))


def cover_decay(spec: TargetSpec, B, n_range, M=None, *, side: str = "above",
                offset: float = 0.05, tol: float = 1e-3, level: int = 1) -> DecayReport:
    """Cover totals at s = s_n +/- offset across levels, with a log2 fit."""
    from . import predim as predim_mod

    if side not in ("above", "below"):
        raise ValueError("side must be 'above' or 'below'")
    ns = sorted(set(int(n) for n in n_range))
    if not ns:
        raise ValueError("empty level range")
    reports = []
    for n in ns:
        res = predim_mod.predim_result(n, B, first_digit(spec, n), M=M, tol=tol)
        if side == "above":
            s = res.sn.hi_float + offset
        else:
            s = res.sn.lo_float - offset
        reports.append(cover_svolume(n, B, spec, s, M, predim=res, level=level))

    ys = [math.log2(r.total.mid_float) for r in reports]
    xbar = sum(ns) / len(ns)
    ybar = sum(ys) / len(ys)
    sxx = sum((x - xbar) ** 2 for x in ns)
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(ns, ys)) / sxx if sxx else 0.0
    resid = max(abs(y - (ybar + slope * (x - xbar))) for x, y in zip(ns, ys))
    dec = all(b.total.mid_float < a.total.mid_float for a, b in zip(reports, reports[1:]))
    nondec = all(b.total.mid_float >= a.total.mid_float for a, b in zip(reports, reports[1:]))
    return DecayReport(tuple(reports), side, offset, slope, resid, dec, nondec)
