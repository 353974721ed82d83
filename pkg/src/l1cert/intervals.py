"""Certified rational enclosures for the few transcendental quantities needed.

Everything else in the package is exact rational arithmetic; the natural
logarithm and Euler's number appear only in the shattering-dimension
calculators.  Instead of floating point we compute rational intervals with
directed rounding from truncated series, so every comparison against them
is a proof.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import InputError

Interval = tuple[Fraction, Fraction]


def e_interval(terms: int = 22) -> Interval:
    """Enclosure of e from the factorial series; tail < 2/(terms+1)!."""
    lo = sum((Fraction(1, factorial(i)) for i in range(terms + 1)), Fraction(0))
    return lo, lo + Fraction(2, factorial(terms + 1))


def _atanh_series(u: Fraction, terms: int) -> Interval:
    # 2 * sum u^(2i+1)/(2i+1) with a geometric tail bound; |u| < 1 required
    acc = Fraction(0)
    power = u
    u2 = u * u
    for i in range(terms):
        acc += power / (2 * i + 1)
        power *= u2
    bound = 2 * abs(power) / ((2 * terms + 1) * (1 - u2))
    val = 2 * acc
    if u >= 0:
        return val, val + bound
    return val - bound, val


@lru_cache(maxsize=None)
def ln2_interval(terms: int = 16) -> Interval:
    # ln 2 = ln(4/3) + ln(3/2); both arguments are close to 1
    a_lo, a_hi = _atanh_series(Fraction(1, 7), terms)
    b_lo, b_hi = _atanh_series(Fraction(1, 5), terms)
    return a_lo + b_lo, a_hi + b_hi


def ln_interval(x: Fraction, terms: int = 16) -> Interval:
    """Certified enclosure of ln(x) for rational x > 0.

    The argument is scaled by powers of two into [2/3, 4/3] where the
    atanh series converges fast, then j * ln(2) is added back with the
    proper rounding direction.
    """
    x = Fraction(x)
    if x <= 0:
        raise InputError("logarithm of a non-positive value")
    j = 0
    lo23, hi43 = Fraction(2, 3), Fraction(4, 3)
    while x > hi43:
        x /= 2
        j += 1
    while x < lo23:
        x *= 2
        j -= 1
    s_lo, s_hi = _atanh_series((x - 1) / (x + 1), terms)
    l2_lo, l2_hi = ln2_interval(terms)
    if j >= 0:
        return s_lo + j * l2_lo, s_hi + j * l2_hi
    return s_lo + j * l2_hi, s_hi + j * l2_lo
