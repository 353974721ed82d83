"""Size and constant calculators for the extraction pipelines.

All bounds are resolved by exact integer comparisons (no logarithms are
evaluated): "k > log2(y) / (1 - alpha)" becomes "2^(k*a) * q^b > p^b" for
1 - alpha = a/b and y = p/q.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, isqrt

from .errors import InputError

JAMES_GRID_BITS = 20


def _min_k_exceeding(y: Fraction, one_minus_alpha: Fraction) -> int:
    """Smallest integer k with k * (1 - alpha) > log2(y)."""
    if y <= 1:
        return 1
    a, b = one_minus_alpha.numerator, one_minus_alpha.denominator
    p, q = y.numerator, y.denominator
    rhs = p**b
    k = 1
    while (1 << (k * a)) * q**b <= rhs:
        k += 1
    return k


def threshold_count(d_const: Fraction) -> int:
    """c = ceil(2D / (2-D)) - 1, the number of threshold levels."""
    if not 1 <= d_const < 2:
        raise InputError("D must lie in [1, 2)")
    return ceil(Fraction(2) * d_const / (2 - d_const)) - 1


def min_k(d_const: Fraction, alpha: Fraction) -> tuple[int, int]:
    """(statement bound, proof bound): smallest admissible ground sizes.

    Statement: k > log2(2D/(2-D)) / (1-alpha).  Proof: the weaker
    k > log2(c-1) / (1-alpha) with c the threshold count.
    """
    d_const, alpha = Fraction(d_const), Fraction(alpha)
    if not 1 <= d_const < 2:
        raise InputError("D must lie in [1, 2)")
    if not 0 < alpha < 1:
        raise InputError("alpha must lie in (0, 1)")
    one_minus = 1 - alpha
    statement = _min_k_exceeding(2 * d_const / (2 - d_const), one_minus)
    c = threshold_count(d_const)
    proof = _min_k_exceeding(Fraction(max(c - 1, 1)), one_minus)
    return statement, proof


def _sqrt_upper(x: Fraction) -> Fraction:
    """Exact square root when rational, else the least 2^-20-grid upper bound."""
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    scale = 1 << (2 * JAMES_GRID_BITS)
    t = isqrt(p * scale // q)
    while t * t * q < p * scale:
        t += 1
    return Fraction(t, 1 << JAMES_GRID_BITS)


def james_halving(b: Fraction, steps: int) -> Fraction:
    """Guaranteed constant after iterating the square-root halving step.

    One step turns a b^2-equivalent copy on dimension m^2 into a
    b-equivalent copy on dimension m, so ``steps`` halvings guarantee
    b^(2^-steps).  Exact when each square root is rational, otherwise a
    certified upper bound (still a valid equivalence constant).
    """
    b = Fraction(b)
    if b < 1:
        raise InputError("equivalence constants are >= 1")
    if steps < 0:
        raise InputError("steps must be >= 0")
    for _ in range(steps):
        b = _sqrt_upper(b)
    return b


def cube_exponent(d_const: Fraction, eps: Fraction, ratio: Fraction | None = None) -> tuple[int, str]:
    """Minimal halving depth w with (1+eps)^(2^w) >= ratio, plus the size formula.

    ``ratio`` defaults to 2D/(4-3D), the constant the halving remark
    starts from; requires 1 <= D < 4/3 and eps > 0.  Returns (w, "n^(2^w)").
    """
    d_const, eps = Fraction(d_const), Fraction(eps)
    if not 1 <= d_const < Fraction(4, 3):
        raise InputError("D must lie in [1, 4/3)")
    if eps <= 0:
        raise InputError("eps must be positive")
    base = Fraction(ratio) if ratio is not None else 2 * d_const / (4 - 3 * d_const)
    if base <= 1:
        raise InputError("starting ratio must exceed 1")
    w = 0
    acc = 1 + eps
    while acc < base:
        acc = acc * acc
        w += 1
    return w, f"n^{2 ** w}"
