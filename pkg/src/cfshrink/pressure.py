"""Finite-alphabet pressure sums for the three potential shapes, and roots.

Each potential is -s log|T'(x)| plus a per-level constant, so the level-n
Birkhoff sum over a cylinder is -s log|(T^n)'| + n c, and its supremum
over the alphabet's attractor is attained where the derivative is
smallest: at tail value x_min(A), the least point of the attractor.  The
sums are then continuant data, computed by exact enumeration when
|A|^depth is small and by the certified envelope iteration for contiguous
alphabets {1..M}.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _transfer
from . import rounding as rd
from . import sums
from .errors import DepthTooLarge, NoRoot
from .ivec import dn, iln, ipow_neg, tree_sum, up
from .rounding import Enclosure, enclose
from .surd import quad_to_enclosure, sqrt_value

PHI1 = "PHI1"
PHI2 = "PHI2"
PHI3 = "PHI3"

_BUDGET = 2_000_000
_EXACT_FAST = 150_000  # above this, contiguous alphabets go to the envelope route
_S_LO, _S_HI = 0.02, 1.49


@dataclass(frozen=True)
class PotentialSpec:
    """-s log|T'| plus the per-level constant picked by `kind`.

    PHI1: -s^2 log B; PHI2: -s log B + (1-s) alpha; PHI3: -(s/2) log B - s beta.
    """

    kind: str
    s: float
    B: object
    alpha: object = None
    beta: object = None

    def __post_init__(self):
        if self.kind not in (PHI1, PHI2, PHI3):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if not float(self.s) > 0:
            raise ValueError("exponent s must be positive")
        if Fraction(self.B) <= 1:
            raise ValueError("base B must exceed 1")
        if self.kind == PHI2 and self.alpha is None:
            raise ValueError("PHI2 needs a growth rate alpha")
        if self.kind == PHI3:
            if self.beta is None:
                raise ValueError("PHI3 needs a growth rate beta")
            if float(self.beta) > 0.5 * math.log(self.B) + 1e-12:
                warnings.warn(
                    f"beta = {float(self.beta):.6g} exceeds (log B)/2; the third "
                    "potential is normally used below that rate",
                    stacklevel=2,
                )

    def range_warnings(self, sstar_lo: float, sstar_hi: float) -> list:
        """Check alpha/beta against a declared bracket for the limit exponent.

        The admissible ranges depend on the unknown limit, so violations
        only warn; the returned messages make the check testable.
        """
        logB = math.log(self.B)
        msgs = []
        if self.kind == PHI2:
            a = float(self.alpha)
            if a < 0.5 * sstar_lo * logB - 1e-12 or a > sstar_hi * logB + 1e-12:
                msgs.append(
                    f"alpha = {a:.6g} outside [{0.5 * sstar_lo * logB:.6g}, "
                    f"{sstar_hi * logB:.6g}] derived from the declared bracket"
                )
        if self.kind == PHI3 and float(self.beta) > 0.5 * logB + 1e-12:
            msgs.append(f"beta = {float(self.beta):.6g} exceeds (log B)/2")
        for m in msgs:
            warnings.warn(m, stacklevel=2)
        return msgs


@dataclass(frozen=True)
class PressureEstimate:
    """Per-depth pressure data: (1/n) log Sigma_n for both sum versions.

    sup_values uses the supremum over the attractor, x0_values the
    zero-tail endpoint; they share the limit.  ratios holds the
    successive log(Sigma_{n+1}/Sigma_n) of the sup version and
    extrapolated is the last of them -- a heuristic, not an enclosure.
    """

    alphabet: tuple
    depth: int
    sup_values: tuple
    x0_values: tuple
    ratios: tuple
    extrapolated: float
    certified: bool = True


@dataclass(frozen=True)
class PressureRootResult:
    """Root report: a fast extrapolated point value plus a certified bracket.

    root comes from bisecting the ratio-extrapolated pressure and carries
    no certificate; certified_bracket is derived from the depth-n sandwich
    (1/n)(log Sigma_n - s log 4) <= P <= (1/n) log Sigma_n.
    """

    kind: str
    alphabet: tuple
    depth: int
    root: float
    certified_bracket: Enclosure
    certified: bool = False


def x_min_value(A):
    """Least point of the attractor of digit set A (a quadratic surd).

    Satisfies x = 1/(Amax + y), y = 1/(Amin + x): the positive root of
    Amax x^2 + Amax Amin x - Amin = 0.
    """
    amin, amax = min(A), max(A)
    m = amax * amin
    # disc = (m + 2)^2 - 4 is never a perfect square for m >= 1
    return (sqrt_value(Fraction(m * m + 4 * m)) - m) / (2 * amax)


def _norm_alphabet(A) -> tuple:
    alpha = tuple(sorted({int(a) for a in A}))
    if not alpha or alpha[0] < 1:
        raise ValueError("alphabet must be a nonempty set of positive digits")
    return alpha


def _is_contiguous(alpha: tuple) -> bool:
    return alpha == tuple(range(1, len(alpha) + 1))


def _route(alpha: tuple, depth: int, budget: int) -> str:
    """Pick exact enumeration or the envelope iteration.

    Exact wins while |A|^depth stays small; past that the directed
    transcendentals dominate and the envelope is cheaper, but it only
    models contiguous alphabets {1..M}.
    """
    count = len(alpha) ** depth
    if count <= _EXACT_FAST:
        return "exact"
    if _is_contiguous(alpha):
        return "dp"
    if count <= budget:
        return "exact"
    raise DepthTooLarge(
        f"alphabet {alpha} is not {{1..M}} and |A|^{depth} exceeds the budget {budget}"
    )


def _const_enclosure(phi: PotentialSpec) -> Enclosure:
    s = enclose(Fraction(phi.s))
    logB = rd.log_(enclose(Fraction(phi.B)))
    if phi.kind == PHI1:
        return rd.neg(rd.mul(rd.mul(s, s), logB))
    if phi.kind == PHI2:
        alpha = enclose(Fraction(phi.alpha))
        gain = rd.mul(rd.sub(enclose(1), s), alpha)
        return rd.add(rd.neg(rd.mul(s, logB)), gain)
    beta = enclose(Fraction(phi.beta))
    return rd.neg(rd.add(rd.mul(rd.div(s, enclose(2)), logB), rd.mul(s, beta)))


def _const_float(kind, s, B, ab) -> float:
    logB = math.log(B)
    if kind == PHI1:
        return -s * s * logB
    if kind == PHI2:
        return -s * logB + (1.0 - s) * float(ab)
    return -0.5 * s * logB - s * float(ab)


# ---------------------------------------------------------------------------
# exact enumeration of continuant data over A^n

_ENUM_CACHE: dict = {}


def _enumerate(alpha: tuple, depth: int, budget: int):
    """Per-level arrays (q_n, q_{n-1}, p_n, p_{n-1}) for all words in A^n."""
    if len(alpha) ** depth > budget:
        raise DepthTooLarge(
            f"|A|^depth = {len(alpha)}^{depth} exceeds the enumeration budget {budget}"
        )
    if (max(alpha) + 1) ** depth >= 2**53:
        raise DepthTooLarge("continuants would outgrow exact float64 range")
    key = (alpha, depth)
    cached = _ENUM_CACHE.get(key)
    if cached is not None:
        return cached
    digits = np.array(alpha, dtype=np.int64)
    q = np.array([1], dtype=np.int64)
    qp = np.array([0], dtype=np.int64)
    p = np.array([0], dtype=np.int64)
    pp = np.array([1], dtype=np.int64)
    levels = []
    for _ in range(depth):
        a = np.repeat(digits, q.size)
        q, qp = a * np.tile(q, digits.size) + np.tile(qp, digits.size), np.tile(
            q, digits.size
        )
        p, pp = a * np.tile(p, digits.size) + np.tile(pp, digits.size), np.tile(
            p, digits.size
        )
        levels.append((q, qp, p, pp))
    _ENUM_CACHE[key] = levels
    return levels


def _sigma_exact(alpha, n, s, xe, budget) -> tuple:
    """(sup, x0) enclosures of the level-n continuant sums, constants excluded."""
    q, qp, _, _ = _enumerate(alpha, n, budget)[n - 1]
    t = 2.0 * float(s)
    qf = q.astype(np.float64)
    qpf = qp.astype(np.float64)
    xlo, xhi = rd.to_f64(xe)
    base_lo = dn(qf + dn(xlo * qpf))
    base_hi = up(qf + up(xhi * qpf))
    sup_terms = ipow_neg(base_lo, base_hi, t)
    x0_terms = ipow_neg(qf, qf, t)
    return (
        rd.from_f64(*tree_sum(*sup_terms)),
        rd.from_f64(*tree_sum(*x0_terms)),
    )


# ---------------------------------------------------------------------------
# envelope route for contiguous alphabets

def _sup_seed(layout, xe, t):
    xlo, xhi = rd.to_f64(xe)
    base_lo = dn(1.0 + dn(xlo * layout.r_lo))
    base_hi = up(1.0 + up(xhi * layout.r_hi))
    return ipow_neg(base_lo, base_hi, t)


def _sigma_dp(M, n, s, xe, level) -> tuple:
    t = 2.0 * float(s)
    layout = _transfer.make_layout(level, amax=M)
    sup = rd.from_f64(*_transfer.apply_power(n, t, layout, seed=_sup_seed(layout, xe, t)))
    x0 = sums.lambda_enclosure(n, s, alphabet_max=M, level=level)
    return sup, x0


def _sigma_x0_estimate(alpha, use_dp, n, s, level, budget) -> float:
    if use_dp:
        return sums.lambda_estimate(n, s, alphabet_max=len(alpha), level=level)
    q = _enumerate(alpha, n, budget)[n - 1][0]
    return float(np.sum(q.astype(np.float64) ** (-2.0 * float(s))))


def pressure_estimate(
    phi: PotentialSpec,
    A,
    depth: int,
    *,
    level: int = 2,
    method: str = "auto",
    budget: int = _BUDGET,
) -> PressureEstimate:
    """Certified per-depth pressure values for the potential over alphabet A.

    method "exact" enumerates A^n; "dp" runs the envelope iteration
    (contiguous alphabets only); "auto" enumerates small problems and
    switches to the envelope for large contiguous alphabets.
    """
    alpha = _norm_alphabet(A)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if method == "auto":
        method = _route(alpha, depth, budget)
    if method == "dp" and not _is_contiguous(alpha):
        raise DepthTooLarge(f"the envelope route needs a {{1..M}} alphabet, got {alpha}")
    if method not in ("exact", "dp"):
        raise ValueError("method must be auto, exact or dp")

    xe = quad_to_enclosure(x_min_value(alpha))
    c = _const_enclosure(phi)
    sup_vals, x0_vals, log_sups = [], [], []
    for n in range(1, depth + 1):
        if method == "exact":
            sup_raw, x0_raw = _sigma_exact(alpha, n, phi.s, xe, budget)
        else:
            sup_raw, x0_raw = _sigma_dp(len(alpha), n, phi.s, xe, level)
        nc = rd.mul(enclose(n), c)
        log_sup = rd.add(rd.log_(sup_raw), nc)
        log_x0 = rd.add(rd.log_(x0_raw), nc)
        sup_vals.append(rd.div(log_sup, enclose(n)))
        x0_vals.append(rd.div(log_x0, enclose(n)))
        log_sups.append(log_sup.mid_float)
    ratios = tuple(
        log_sups[i + 1] - log_sups[i] for i in range(depth - 1)
    )
    extrapolated = ratios[-1] if ratios else log_sups[0]
    return PressureEstimate(
        alphabet=alpha,
        depth=depth,
        sup_values=tuple(sup_vals),
        x0_values=tuple(x0_vals),
        ratios=ratios,
        extrapolated=extrapolated,
    )


def _ratio_pressure_fn(kind, B, ab, alpha, depth, level, budget):
    """Float log(Sigma_d / Sigma_{d-1}) of the x0 sums, for localization."""
    dp = _route(alpha, depth, budget) == "dp"
    if not dp:
        _enumerate(alpha, depth, budget)

    def f(s: float) -> float:
        c = _const_float(kind, s, B, ab)
        lo = _sigma_x0_estimate(alpha, dp, depth - 1, s, level, budget)
        hi = _sigma_x0_estimate(alpha, dp, depth, s, level, budget)
        return math.log(hi) - math.log(lo) + c

    return f


def _x0_value_enclosure(kind, B, ab, alpha, depth, s, level, budget) -> Enclosure:
    """(1/n) log Sigma_n^(x0) at exponent s, certified."""
    phi = PotentialSpec(kind, s, B, alpha=ab if kind == PHI2 else None,
                        beta=ab if kind == PHI3 else None)
    if _route(alpha, depth, budget) == "exact":
        q = _enumerate(alpha, depth, budget)[depth - 1][0]
        qf = q.astype(np.float64)
        raw = rd.from_f64(*tree_sum(*ipow_neg(qf, qf, 2.0 * float(s))))
    else:
        raw = sums.lambda_enclosure(depth, s, alphabet_max=len(alpha), level=level)
    log_sig = rd.add(rd.log_(raw), rd.mul(enclose(depth), _const_enclosure(phi)))
    return rd.div(log_sig, enclose(depth))


def pressure_root(
    kind: str,
    B,
    alpha_or_beta,
    A,
    depth: int = 8,
    tol: float = 1e-3,
    *,
    level: int = 2,
    budget: int = _BUDGET,
) -> PressureRootResult:
    """Exponent where the alphabet-restricted pressure crosses zero.

    The point value bisects the ratio-extrapolated pressure (flagged
    non-certified); the bracket sandwiches the true root using
    (1/n)(log Sigma_n - s log 4) <= P <= (1/n) log Sigma_n at n = depth.
    """
    alpha = _norm_alphabet(A)
    if depth < 2:
        raise ValueError("depth must be >= 2 for a ratio root")
    ratio = _ratio_pressure_fn(kind, B, alpha_or_beta, alpha, depth, level, budget)

    if ratio(_S_HI) > 0.0:
        raise NoRoot(f"pressure still positive at s = {_S_HI}")
    a, b = _S_LO, _S_HI
    if ratio(a) <= 0.0:
        root = a  # root at or below the probing floor
    else:
        while b - a > tol:
            mid = 0.5 * (a + b)
            if ratio(mid) > 0.0:
                a = mid
            else:
                b = mid
        root = 0.5 * (a + b)

    def upper_ok(s: float) -> bool:
        return _x0_value_enclosure(kind, B, alpha_or_beta, alpha, depth, s, level, budget).certified_le(0)

    def lower_ok(s: float) -> bool:
        u = _x0_value_enclosure(kind, B, alpha_or_beta, alpha, depth, s, level, budget)
        slack = rd.div(rd.mul(enclose(Fraction(s)), rd.log_(enclose(4))), enclose(depth))
        return rd.sub(u, slack).certified_ge(0)

    if not upper_ok(_S_HI):
        raise NoRoot(f"cannot certify nonpositive pressure by s = {_S_HI}")
    a, b = _S_LO, _S_HI
    for _ in range(26):
        mid = 0.5 * (a + b)
        if upper_ok(mid):
            b = mid
        else:
            a = mid
    hi_end = b
    lo_end = 0.0
    if lower_ok(_S_LO):
        a, b = _S_LO, hi_end
        for _ in range(26):
            mid = 0.5 * (a + b)
            if lower_ok(mid):
                a = mid
            else:
                b = mid
        lo_end = a
    return PressureRootResult(
        kind=kind,
        alphabet=alpha,
        depth=depth,
        root=root,
        certified_bracket=rd.from_f64(lo_end, hi_end),
    )


def variation_check(phi: PotentialSpec, n: int, A, *, budget: int = _BUDGET) -> Enclosure:
    """Upper bound on the level-n oscillation of the potential.

    The constant part drops out, so this is 2s times the largest
    log-ratio of cylinder endpoints over words in A^n; endpoints are the
    exact rationals p_n/q_n and (p_n + p_{n-1})/(q_n + q_{n-1}).
    """
    alpha = _norm_alphabet(A)
    if n < 1:
        raise ValueError("n must be >= 1")
    q, qp, p, pp = _enumerate(alpha, n, budget)[n - 1]
    qf, qpf = q.astype(np.float64), qp.astype(np.float64)
    pf, ppf = p.astype(np.float64), pp.astype(np.float64)
    qa = pf / qf
    qb = (pf + ppf) / (qf + qpf)  # operands exact by the float64 magnitude guard
    a_lo, a_hi = dn(qa), up(qa)
    b_lo, b_hi = dn(qb), up(qb)
    hi_ratio = up(np.maximum(a_hi, b_hi) / dn(np.minimum(a_lo, b_lo)))
    lo_ratio = dn(np.maximum(a_lo, b_lo) / up(np.minimum(a_hi, b_hi)))
    llo, lhi = iln(np.maximum(lo_ratio, 1.0), hi_ratio)
    t = 2.0 * float(phi.s)
    return rd.from_f64(
        float(dn(t * np.max(llo))), float(up(t * np.max(lhi)))
    )
