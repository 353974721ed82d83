"""Generators for the hub-and-sets graphs, their metrics, and the explicit embeddings.

Two graph families are produced, both hub-and-sets graphs with unit edges:

  * the finite family on ground set [1..n]: hub 0, integer vertices, and one
    vertex per nonempty subset, adjacent to its members;
  * the segment family truncated at N: set vertices are initial segments
    [1..m] (m < N) and tails [m..] (2 <= m <= N), adjacent to the integers
    they contain.

Shortest-path distances of the finite family have the closed form

    d(0,a) = 1   d(a,b) = 2    d(0,A) = 2
    d(a,A) = 1 if a in A else 3
    d(A,B) = 2 if A and B intersect else 4

which is what ``build_m_ell1`` fills in directly (the BFS route is kept as
a test oracle).  The truncated segment family is small, so its metric is
computed by BFS outright.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from . import labels
from .errors import InputError
from .metric import FiniteMetricSpace, Graph, PointMap, make_graph, shortest_path_metric

_CHUNK = 512


@dataclass(frozen=True)
class MVertex:
    """Vertex of the finite hub-and-sets graph: hub, integer, or nonempty subset."""

    kind: str
    a: int = 0
    mask: int = 0

    def __post_init__(self):
        if self.kind not in ("zero", "int", "set"):
            raise InputError(f"bad vertex kind {self.kind!r}")
        if self.kind == "int" and self.a < 1:
            raise InputError("integer vertices start at 1")
        if self.kind == "set" and self.mask <= 0:
            raise InputError("subset vertices must be nonempty")

    @classmethod
    def zero(cls) -> "MVertex":
        return cls("zero")

    @classmethod
    def integer(cls, a: int) -> "MVertex":
        return cls("int", a=a)

    @classmethod
    def subset(cls, mask: int) -> "MVertex":
        return cls("set", mask=mask)

    @property
    def label(self) -> str:
        if self.kind == "zero":
            return labels.ZERO
        if self.kind == "int":
            return labels.int_label(self.a)
        return labels.set_label(self.mask)


@dataclass(frozen=True)
class RVertex:
    """Vertex of the segment graph: hub, integer, initial segment, or tail."""

    kind: str
    a: int = 0

    def __post_init__(self):
        if self.kind not in ("zero", "int", "init", "tail"):
            raise InputError(f"bad vertex kind {self.kind!r}")
        if self.kind != "zero" and self.a < 1:
            raise InputError("vertex payload must be >= 1")

    @classmethod
    def zero(cls) -> "RVertex":
        return cls("zero")

    @classmethod
    def integer(cls, a: int) -> "RVertex":
        return cls("int", a=a)

    @classmethod
    def initial(cls, n: int) -> "RVertex":
        return cls("init", a=n)

    @classmethod
    def tail(cls, n: int) -> "RVertex":
        return cls("tail", a=n)

    @property
    def label(self) -> str:
        if self.kind == "zero":
            return labels.ZERO
        if self.kind == "int":
            return labels.int_label(self.a)
        if self.kind == "init":
            return labels.init_label(self.a)
        return labels.tail_label(self.a)


def _matrix_dtype(size: int):
    return np.int16 if size > 2048 else np.int64


def m_ell1_labels(n: int) -> tuple[str, ...]:
    return (
        labels.ZERO,
        *(labels.int_label(a) for a in range(1, n + 1)),
        *(labels.set_label(mask) for mask in range(1, 1 << n)),
    )


def m_ell1_graph(n: int) -> Graph:
    verts = m_ell1_labels(n)
    pairs = [(0, a) for a in range(1, n + 1)]
    for mask in range(1, 1 << n):
        v = n + mask
        for a in range(1, n + 1):
            if (mask >> (a - 1)) & 1:
                pairs.append((a, v))
    return Graph(verts, tuple(pairs))


def build_m_ell1(n: int, max_n: int = 14) -> tuple[FiniteMetricSpace, Graph]:
    """Finite hub-and-sets space on ground [1..n] with its graph.

    The metric is the closed form of the BFS distance (they agree; the
    equivalence is exercised by the test suite for small n).  ``max_n``
    caps the dense-matrix memory; raise it explicitly for bigger builds.
    """
    if n < 1:
        raise InputError("n must be >= 1")
    if n > max_n:
        raise InputError(f"n={n} exceeds the memory cap max_n={max_n}")
    verts = m_ell1_labels(n)
    size = len(verts)
    num = np.zeros((size, size), dtype=_matrix_dtype(size))
    s0 = n + 1  # first subset column
    num[0, 1:s0] = 1
    num[1:s0, 0] = 1
    num[0, s0:] = 2
    num[s0:, 0] = 2
    num[1:s0, 1:s0] = 2
    masks = np.arange(1, 1 << n, dtype=np.int64)
    for a in range(1, n + 1):
        row = np.where((masks >> (a - 1)) & 1, 1, 3).astype(num.dtype)
        num[a, s0:] = row
        num[s0:, a] = row
    for lo in range(0, masks.size, _CHUNK):
        sub = masks[lo:lo + _CHUNK]
        inter = (sub[:, None] & masks[None, :]) != 0
        num[s0 + lo:s0 + lo + sub.size, s0:] = np.where(inter, 2, 4).astype(num.dtype)
    np.fill_diagonal(num, 0)
    return FiniteMetricSpace(verts, num), m_ell1_graph(n)


def m_r_labels(n_max: int) -> tuple[str, ...]:
    return (
        labels.ZERO,
        *(labels.int_label(a) for a in range(1, n_max + 1)),
        *(labels.init_label(m) for m in range(1, n_max)),
        *(labels.tail_label(m) for m in range(2, n_max + 1)),
    )


def m_r_graph(n_max: int) -> Graph:
    """Truncated segment graph; every segment keeps an integer neighbor."""
    if n_max < 2:
        raise InputError("truncation bound must be >= 2")
    verts = m_r_labels(n_max)
    edges = [(labels.ZERO, labels.int_label(a)) for a in range(1, n_max + 1)]
    for m in range(1, n_max):
        edges += [(labels.int_label(a), labels.init_label(m)) for a in range(1, m + 1)]
    for m in range(2, n_max + 1):
        edges += [(labels.int_label(a), labels.tail_label(m)) for a in range(m, n_max + 1)]
    return make_graph(verts, edges)


def build_m_r(n_max: int) -> FiniteMetricSpace:
    """BFS metric of the truncated segment graph.

    The truncation keeps initial segments [1..m] for m < N and tails [m..]
    for 2 <= m <= N, so every shortest path of the infinite graph survives
    and the distances are truncation independent.
    """
    return shortest_path_metric(m_r_graph(n_max))


def rho_metric(kind: str, n: int) -> FiniteMetricSpace:
    """The stable companion metric on the same vertex set.

    Distance table (thirds): hub-integer 2/3, hub-set 4/3, integer-integer
    4/3, integer-set 2, set-set 8/3, where "set" covers the whole F part
    of the chosen space (subsets, or initial segments and tails).
    """
    if kind == "m-ell1":
        verts = m_ell1_labels(n)
        n_int = n
    elif kind == "m-r":
        if n < 2:
            raise InputError("truncation bound must be >= 2")
        verts = m_r_labels(n)
        n_int = n
    else:
        raise InputError(f"unknown space kind {kind!r}")
    size = len(verts)
    s0 = 1 + n_int
    num = np.zeros((size, size), dtype=_matrix_dtype(size))
    num[0, 1:s0] = 2
    num[1:s0, 0] = 2
    num[0, s0:] = 4
    num[s0:, 0] = 4
    num[1:s0, 1:s0] = 4
    num[1:s0, s0:] = 6
    num[s0:, 1:s0] = 6
    num[s0:, s0:] = 8
    np.fill_diagonal(num, 0)
    return FiniteMetricSpace(verts, num, den=3)


@dataclass(frozen=True)
class EventuallyConstSeq:
    """Sequence with finitely many exceptional leading terms, sup-normed.

    Canonical form trims trailing head entries equal to the tail value.
    """

    head: tuple[Fraction, ...]
    tail: Fraction

    def __post_init__(self):
        head = tuple(Fraction(v) for v in self.head)
        tail = Fraction(self.tail)
        while head and head[-1] == tail:
            head = head[:-1]
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "tail", tail)

    def at(self, i: int) -> Fraction:
        """Coordinate i (1-based)."""
        if i < 1:
            raise InputError("coordinates start at 1")
        return self.head[i - 1] if i <= len(self.head) else self.tail

    def sup_norm(self) -> Fraction:
        return max([abs(self.tail)] + [abs(v) for v in self.head], default=abs(self.tail))

    def sup_dist(self, other: "EventuallyConstSeq") -> Fraction:
        span = max(len(self.head), len(other.head))
        best = abs(self.tail - other.tail)
        for i in range(1, span + 1):
            best = max(best, abs(self.at(i) - other.at(i)))
        return best


def _as_r_vertex(v: Union[RVertex, str]) -> RVertex:
    if isinstance(v, RVertex):
        return v
    kind, payload = labels.classify(v)
    if kind == "set":
        raise InputError(f"not a segment-graph vertex: {v!r}")
    return RVertex(kind) if kind == "zero" else RVertex(kind, a=payload)


def phi_embed(v: Union[RVertex, str]) -> EventuallyConstSeq:
    """The isometry of the segment graph into convergent sequences.

    hub -> 0,  [1..n] -> 2 on coordinates > n,  [n..] -> -2 on coordinates
    <= n,  integer m -> -1 on coordinates <= m and +1 beyond.
    """
    vert = _as_r_vertex(v)
    one = Fraction(1)
    if vert.kind == "zero":
        return EventuallyConstSeq((), Fraction(0))
    if vert.kind == "int":
        return EventuallyConstSeq((-one,) * vert.a, one)
    if vert.kind == "init":
        return EventuallyConstSeq((Fraction(0),) * vert.a, 2 * one)
    return EventuallyConstSeq((-2 * one,) * vert.a, Fraction(0))


def phi_pointmap(n_max: int) -> PointMap:
    """Point map form of the sequence embedding on the truncation.

    Coordinates "1".."N" plus a final "tail" slot; sup distances in this
    finite representation equal the sequence-space distances because every
    image is constant beyond coordinate N.
    """
    space = build_m_r(n_max)
    coords = tuple(str(i) for i in range(1, n_max + 1)) + ("tail",)
    num = np.empty((space.size, n_max + 1), dtype=np.int64)
    for r, p in enumerate(space.points):
        seq = phi_embed(p)
        num[r] = [int(seq.at(i)) for i in range(1, n_max + 1)] + [int(seq.tail)]
    return PointMap(source=space, coord_labels=coords, image_num=num, image_den=1)


@dataclass(frozen=True)
class SparseVector:
    """Finitely supported exact vector under the l1 norm; zeros are dropped."""

    entries: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        cleaned = tuple(sorted((k, Fraction(v)) for k, v in self.entries if v != 0))
        keys = [k for k, _ in cleaned]
        if len(set(keys)) != len(keys):
            raise InputError("duplicate sparse coordinates")
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def from_dict(cls, data: dict[str, Fraction]) -> "SparseVector":
        return cls(tuple(data.items()))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.entries)

    def l1_norm(self) -> Fraction:
        return sum((abs(v) for _, v in self.entries), Fraction(0))

    def l1_dist(self, other: "SparseVector") -> Fraction:
        a, b = self.as_dict(), other.as_dict()
        keys = set(a) | set(b)
        return sum((abs(a.get(k, Fraction(0)) - b.get(k, Fraction(0))) for k in keys), Fraction(0))


def g_embed(v: Union[MVertex, RVertex, str]) -> SparseVector:
    """Isometry of the stable companion metric into l1: scaled unit vectors.

    hub -> 0, integer vertex -> (2/3) e_v, set-part vertex -> (4/3) e_v.
    """
    if isinstance(v, (MVertex, RVertex)):
        kind, label = v.kind, v.label
    else:
        kind, _ = labels.classify(v)
        label = v
    if kind == "zero":
        return SparseVector(())
    if kind == "int":
        return SparseVector(((label, Fraction(2, 3)),))
    return SparseVector(((label, Fraction(4, 3)),))


def build_cube(n: int, p, max_n: int = 12) -> FiniteMetricSpace:
    """The n-cube {0,1}^n under an l_p norm, p in {1, 2, inf}.

    p = 1 and p = inf give exact integer metrics.  p = 2 distances are
    irrational, so the space is flagged approximate: float distances plus
    an exact squared-distance matrix alongside.
    """
    if n < 1:
        raise InputError("n must be >= 1")
    if n > max_n:
        raise InputError(f"n={n} exceeds the memory cap max_n={max_n}")
    norm = {1: 1, "1": 1, 2: 2, "2": 2, "inf": "inf", float("inf"): "inf", "∞": "inf"}.get(p)
    if norm is None:
        raise InputError(f"unsupported p: {p!r} (use 1, 2 or inf)")
    size = 1 << n
    points = tuple(format(i, f"0{n}b") for i in range(size))
    codes = np.arange(size, dtype=np.uint64)
    xor = codes[:, None] ^ codes[None, :]
    hamming = np.bitwise_count(xor).astype(_matrix_dtype(size))
    if norm == 1:
        return FiniteMetricSpace(points, hamming)
    if norm == "inf":
        return FiniteMetricSpace(points, (hamming > 0).astype(_matrix_dtype(size)))
    return FiniteMetricSpace(
        points,
        np.sqrt(hamming.astype(np.float64)),
        exact=False,
        sq_num=hamming.astype(np.int64),
    )
