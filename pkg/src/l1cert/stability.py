"""Iterated double limits on structured point families.

A double family pairs two point sequences with a closed-form distance.
For the families shipped here the distance stabilizes once the inner index
passes the outer one, so ultrafilter limits coincide with eventual values
and both iterated limits are computed exactly (and their stabilization is
witnessed, not assumed).  A gap between the two limit orders certifies that
the space cannot embed into any stable metric space with distortion below
the quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import labels
from .errors import InputError

PRESETS = ("m-ell1-d", "m-r-d", "m-ell1-rho", "m-r-rho")


@dataclass(frozen=True)
class DoubleFamily:
    """Two indexed point sequences plus an exact closed-form distance.

    ``dist(n, m)`` must become constant in m once m > max(n, n0), and
    symmetrically in n; ``iterated_limits`` verifies this on the window it
    evaluates and refuses families where stabilization is not observed.
    """

    name: str
    x_label: Callable[[int], str]
    y_label: Callable[[int], str]
    dist: Callable[[int, int], Fraction]
    n0: int = 1


@dataclass(frozen=True)
class IteratedLimits:
    lim_n_lim_m: Fraction
    lim_m_lim_n: Fraction

    @property
    def ratio(self) -> Fraction:
        a, b = self.lim_n_lim_m, self.lim_m_lim_n
        if a == 0 or b == 0:
            raise InputError("iterated limit is zero; no ratio")
        return max(a / b, b / a)


def _eventual(values: list[Fraction], what: str) -> Fraction:
    first = values[0]
    for v in values[1:]:
        if v != first:
            raise InputError(f"family does not stabilize: {what} takes {first} and {v}")
    return first


def iterated_limits(fam: DoubleFamily, horizon: int) -> IteratedLimits:
    """Both iterated limits, each witnessed as an eventually constant value.

    Inner values for index i are read off the window max(i, n0) < j <=
    horizon and must be constant there; the outer sequence must then be
    constant for n0 < i <= horizon - 1.
    """
    if horizon < fam.n0 + 2:
        raise InputError(f"horizon must be at least N0 + 2 = {fam.n0 + 2}")

    def inner_rows(transpose: bool) -> Fraction:
        outer_vals = []
        for i in range(fam.n0 + 1, horizon):
            window = range(max(i, fam.n0) + 1, horizon + 1)
            vals = [fam.dist(j, i) if transpose else fam.dist(i, j) for j in window]
            side = "column" if transpose else "row"
            outer_vals.append(_eventual(vals, f"{side} {i}"))
        return _eventual(outer_vals, "outer sequence")

    return IteratedLimits(lim_n_lim_m=inner_rows(False), lim_m_lim_n=inner_rows(True))


def stability_gap_ratio(fam: DoubleFamily, horizon: int = 32) -> Fraction:
    """Certified non-embeddability constant into stable targets."""
    return iterated_limits(fam, horizon).ratio


def swap(fam: DoubleFamily) -> DoubleFamily:
    return DoubleFamily(
        name=f"{fam.name}-swapped",
        x_label=fam.y_label,
        y_label=fam.x_label,
        dist=lambda n, m: fam.dist(m, n),
        n0=fam.n0,
    )


def preset(name: str) -> DoubleFamily:
    """Named families: integers against growing set vertices, under d or rho.

    Under the graph metric d(x_n, y_m) is 1 for n <= m (membership edge)
    and 3 otherwise, so the iterated limits are 1 and 3.  Under rho the
    distance is constantly 2 and the limits agree.
    """
    if name == "m-ell1-d":
        return DoubleFamily(
            name=name,
            x_label=labels.int_label,
            y_label=lambda m: labels.set_label((1 << m) - 1),
            dist=lambda n, m: Fraction(1) if n <= m else Fraction(3),
        )
    if name == "m-r-d":
        return DoubleFamily(
            name=name,
            x_label=labels.int_label,
            y_label=labels.init_label,
            dist=lambda n, m: Fraction(1) if n <= m else Fraction(3),
        )
    if name == "m-ell1-rho":
        return DoubleFamily(
            name=name,
            x_label=labels.int_label,
            y_label=lambda m: labels.set_label((1 << m) - 1),
            dist=lambda n, m: Fraction(2),
        )
    if name == "m-r-rho":
        return DoubleFamily(
            name=name,
            x_label=labels.int_label,
            y_label=labels.init_label,
            dist=lambda n, m: Fraction(2),
        )
    raise InputError(f"unknown preset {name!r} (choose from {', '.join(PRESETS)})")
