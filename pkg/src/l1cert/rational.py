"""Exact rational values and their scaled-integer views.

Every distance, coordinate and threshold in this package is a rational
number.  The public API works with ``fractions.Fraction``; the numeric
kernels work on integer numerator arrays over a single common denominator,
which keeps all comparisons exact.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

# Cross products of two scaled values must stay below 2**63.
INT64_GUARD = 1 << 31

_INT_RE = re.compile(r"^-?\d+$")
_FRAC_RE = re.compile(r"^(-?\d+)/(\d+)$")


def parse_rational(value) -> Fraction:
    """Parse an exact rational from an int or a canonical "p/q" string."""
    if isinstance(value, bool):
        raise InputError(f"not a rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if _INT_RE.match(text):
            return Fraction(int(text))
        m = _FRAC_RE.match(text)
        if m:
            num, den = int(m.group(1)), int(m.group(2))
            if den == 0:
                raise InputError(f"zero denominator: {value!r}")
            if den == 1 or gcd(abs(num), den) != 1:
                raise InputError(f"rational not in canonical reduced form: {value!r}")
            return Fraction(num, den)
        raise InputError(f"cannot parse rational: {value!r}")
    raise InputError(f"cannot parse rational from {type(value).__name__}: {value!r}")


def format_rational(q: Fraction):
    """Canonical JSON form: bare int when integral, "p/q" otherwise."""
    q = Fraction(q)
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = lcm(den, Fraction(v).denominator)
    return den


def scale_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[np.ndarray, int]:
    """Scale a rectangular table of rationals to an int64 matrix + denominator."""
    den = 1
    for row in rows:
        for v in row:
            den = lcm(den, Fraction(v).denominator)
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            f = Fraction(v)
            n = f.numerator * (den // f.denominator)
            if abs(n) >= INT64_GUARD:
                raise InputError(
                    "values too large for the exact integer kernels "
                    f"(scaled numerator {n} at ({i},{j}))"
                )
            out[i, j] = n
    return out, den


def check_kernel_magnitude(*arrays: np.ndarray) -> bool:
    """True when all entries are safely below the cross-product guard."""
    return all(
        a.size == 0 or max(abs(int(a.max())), abs(int(a.min()))) < INT64_GUARD
        for a in arrays
    )
