"""Set families as bitsets, shattered-set extraction, and the counting bounds.

Subsets of [1..k] are integer bitmasks with bit i-1 standing for element i.
The extractor follows the inductive proof of the Sauer-Shelah-VC lemma:
split on the largest ground element, recurse into whichever of the two
derived families is still above its bound.  When the cardinality
hypothesis fails it falls back to exhaustive search, which may genuinely
fail.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Optional

from .errors import InputError, InternalInvariantError
from .intervals import e_interval, ln2_interval, ln_interval

ETA_GRID_BITS = 20


@dataclass(frozen=True)
class SetFamily:
    """Deduplicated family of subsets of [1..k], each a bitmask."""

    k: int
    members: frozenset[int]

    def __post_init__(self):
        if self.k < 0:
            raise InputError("ground size must be >= 0")
        top = 1 << self.k
        for m in self.members:
            if not 0 <= m < top:
                raise InputError(f"member {m:#x} outside ground set of size {self.k}")

    @classmethod
    def from_masks(cls, k: int, masks: Iterable[int]) -> "SetFamily":
        return cls(k, frozenset(int(m) for m in masks))

    def __len__(self) -> int:
        return len(self.members)


def sauer_bound(k: int, m: int) -> int:
    """sum_{i < m} C(k, i): families above this size must shatter an m-set.

    Defined for any m >= 0 (terms with i > k vanish), which the recursive
    extractor relies on when the ground set shrinks below m.
    """
    if k < 0 or m < 0:
        raise InputError("need k >= 0 and m >= 0")
    return sum(comb(k, i) for i in range(m))


def binom_bound_check(k: int, m: int, terms: int = 22) -> bool:
    """Certified check of sum_{i<=m} C(k,i) <= (e*k/m)^m via a rational e-enclosure."""
    if not 1 <= m <= k:
        raise InputError("need 1 <= m <= k")
    total = sum(comb(k, i) for i in range(m + 1))
    e_lo, e_hi = e_interval(terms)
    if total <= (e_lo * k / m) ** m:
        return True
    if total > (e_hi * k / m) ** m:
        return False
    raise InternalInvariantError("e enclosure too loose; raise terms")


def shatters(family: SetFamily, h_mask: int) -> bool:
    """True iff every subset of H appears as a trace member & H."""
    if h_mask >> family.k:
        raise InputError("H is not a subset of the ground set")
    want = 1 << bin(h_mask).count("1")
    traces = {m & h_mask for m in family.members}
    return len(traces) == want


def _extract_recursive(members: set[int], ground: int, m: int) -> int:
    if m == 0:
        return 0
    x = ground.bit_length() - 1  # split on the largest ground element
    bit = 1 << x
    sub_ground = ground ^ bit
    k2 = bin(sub_ground).count("1")
    s0 = {a & ~bit for a in members}
    if len(s0) > sauer_bound(k2, m):
        return _extract_recursive(s0, sub_ground, m)
    s1 = {a for a in members if not a & bit and (a | bit) in members}
    if len(s1) <= sauer_bound(k2, m - 1):
        raise InternalInvariantError("split invariant failed: both branches undersized")
    return _extract_recursive(s1, sub_ground, m - 1) | bit


def sauer_shelah_extract(family: SetFamily, m: int) -> Optional[int]:
    """Bitmask of an m-element set shattered by the family, or None.

    Guaranteed to succeed (via the inductive split) when
    len(family) > sauer_bound(k, m); otherwise an exhaustive scan over all
    C(k, m) candidates in lexicographic order, which may return None.
    Any returned mask is re-checked with ``shatters`` before returning.
    """
    k = family.k
    if not 0 <= m <= k:
        raise InputError("need 0 <= m <= k")
    if len(family) > sauer_bound(k, m):
        h = _extract_recursive(set(family.members), (1 << k) - 1, m)
        if bin(h).count("1") != m or not shatters(family, h):
            raise InternalInvariantError("recursive extraction produced a bad set")
        return h
    for combo in combinations(range(k), m):
        h = 0
        for x in combo:
            h |= 1 << x
        if shatters(family, h):
            return h
    return None


def _eta_predicate(t: int, target_lo: Fraction, terms: int) -> bool:
    # certified check of eta*(1 - ln eta) < alpha*ln 2 at eta = t / 2^bits
    eta_val = Fraction(t, 1 << ETA_GRID_BITS)
    ln_lo, _ = ln_interval(eta_val, terms)
    return eta_val * (1 - ln_lo) < target_lo


def eta(alpha: Fraction, terms: int = 16) -> Fraction:
    """Largest grid rational (resolution 2^-20) with 2^alpha > (e/eta)^eta.

    The defining inequality is checked in the equivalent certified form
    eta * (1 - ln eta) < alpha * ln 2, using directed-rounding rational
    enclosures, so the returned value provably satisfies it.
    """
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise InputError("alpha must lie in (0, 1]")
    target_lo = alpha * ln2_interval(terms)[0]
    lo, hi = 1, 1 << ETA_GRID_BITS  # predicate true at lo, false at hi (eta=1)
    if not _eta_predicate(lo, target_lo, terms):
        raise InputError("alpha too small for the 2^-20 grid resolution")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _eta_predicate(mid, target_lo, terms):
            lo = mid
        else:
            hi = mid
    return Fraction(lo, 1 << ETA_GRID_BITS)


def eta_satisfies(alpha: Fraction, value: Fraction, terms: int = 16) -> bool:
    """Certified check that 2^alpha > (e/value)^value (strictly)."""
    target_lo = Fraction(alpha) * ln2_interval(terms)[0]
    value = Fraction(value)
    if not 0 < value < 1:
        return False
    ln_lo, _ = ln_interval(value, terms)
    return value * (1 - ln_lo) < target_lo
