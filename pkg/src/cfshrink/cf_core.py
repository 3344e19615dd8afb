"""Exact continued-fraction arithmetic.

Gauss map, digit expansion, continuant ladders, cylinder intervals and
their left-to-right ordering.  Everything here is exact rational/integer
arithmetic; no floating point.  All values are immutable and all
functions pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Word = tuple[int, ...]  # digits a_1..a_n, each >= 1; () is the level-0 word


def _check_word(w: Word) -> None:
    for a in w:
        if not isinstance(a, int) or a < 1:
            raise ValueError(f"word digits must be integers >= 1, got {a!r}")


def gauss_step(x: Fraction) -> Fraction:
    """T(x) = 1/x - floor(1/x), with T(0) = 0."""
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"gauss_step needs x in [0,1), got {x}")
    if x == 0:
        return Fraction(0)
    inv = 1 / x
    return inv - (inv.numerator // inv.denominator)


def expand(x: Fraction, max_digits: int = 64) -> Word:
    """Digits of x by the floor algorithm, stopping at 0 or max_digits.

    Terminating expansions are canonical: the last digit is whatever the
    floor algorithm produces, never a trailing-1 rewrite.
    """
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError(f"expand needs x in (0,1), got {x}")
    digits = []
    while x != 0 and len(digits) < max_digits:
        inv = 1 / x
        a = inv.numerator // inv.denominator
        digits.append(a)
        x = inv - a
    return tuple(digits)


@dataclass(frozen=True)
class Continuants:
    """Ladder (p_k, q_k) for k = -1..n with the standard seeds."""

    word: Word
    ladder: tuple[tuple[int, int], ...]  # index 0 is k=-1

    def p(self, k: int) -> int:
        return self.ladder[k + 1][0]

    def q(self, k: int) -> int:
        return self.ladder[k + 1][1]

    @property
    def n(self) -> int:
        return len(self.word)


def continuants(w: Word) -> Continuants:
    """Full exact ladder from p_{k+1} = a_{k+1} p_k + p_{k-1} (same for q)."""
    _check_word(w)
    ladder = [(1, 0), (0, 1)]  # k = -1, 0
    p_prev, q_prev = 1, 0
    p_cur, q_cur = 0, 1
    for a in w:
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur
        ladder.append((p_cur, q_cur))
    return Continuants(tuple(w), tuple(ladder))


@dataclass(frozen=True)
class CylinderInterval:
    """Set of x whose expansion starts with `word`; half-open by parity.

    Even |word|: [p/q, (p+p')/(q+q')).  Odd |word|: ((p+p')/(q+q'), p/q].
    """

    word: Word
    left: Fraction
    right: Fraction
    closed_left: bool
    closed_right: bool

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def contains(self, x) -> bool:
        x = Fraction(x)
        if self.closed_left:
            ok_left = self.left <= x
        else:
            ok_left = self.left < x
        if self.closed_right:
            return ok_left and x <= self.right
        return ok_left and x < self.right


def cylinder(w: Word) -> CylinderInterval:
    """Exact cylinder interval of a word; the empty word gives [0, 1)."""
    _check_word(w)
    if not w:
        return CylinderInterval((), Fraction(0), Fraction(1), True, False)
    c = continuants(w)
    n = len(w)
    conv = Fraction(c.p(n), c.q(n))
    other = Fraction(c.p(n) + c.p(n - 1), c.q(n) + c.q(n - 1))
    if n % 2 == 0:
        return CylinderInterval(tuple(w), conv, other, True, False)
    return CylinderInterval(tuple(w), other, conv, False, True)


def eval_word(w: Word, tail: Fraction = Fraction(0)) -> Fraction:
    """Value of [a_1, ..., a_n + tail]; tail = 0 gives the convergent p_n/q_n."""
    _check_word(w)
    if not w:
        raise ValueError("eval_word needs a nonempty word")
    tail = Fraction(tail)
    if not 0 <= tail <= 1:
        raise ValueError(f"tail must lie in [0,1], got {tail}")
    c = continuants(w)
    n = len(w)
    t = w[n - 1] + tail
    num = t * c.p(n - 1) + c.p(n - 2)
    den = t * c.q(n - 1) + c.q(n - 2)
    return num / den


def compare_cylinders(w: Word, a: int, b: int) -> int:
    """-1 if I(w+(a,)) lies left of I(w+(b,)), else 1.

    Sub-cylinders run left-to-right as the digit increases when |w| is
    odd, and right-to-left when |w| is even.
    """
    _check_word(w)
    if a == b:
        raise ValueError("digits must differ")
    if a < 1 or b < 1:
        raise ValueError("digits must be >= 1")
    digit_order = -1 if a < b else 1
    return digit_order if len(w) % 2 == 1 else -digit_order
