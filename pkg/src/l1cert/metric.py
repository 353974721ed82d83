"""Exact finite metric spaces, graph metrics, embeddings and distortion.

Distances are rationals stored as an integer numerator matrix over one
common denominator, so every comparison in this module is exact.  The
only non-exact spaces are the Euclidean cubes, which are flagged and
excluded from every certification path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import labels
from .backend import kernels
from .errors import InputError
from .rational import check_kernel_magnitude, scale_rows


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labeled point set with an exact rational distance matrix.

    ``num[i, j] / den`` is the distance between points i and j.  When
    ``exact`` is False (Euclidean cubes) ``num`` holds float64 distances
    and ``sq_num`` the exact squared distances; such spaces are rejected
    by every certification routine.
    """

    points: tuple[str, ...]
    num: np.ndarray
    den: int = 1
    exact: bool = True
    sq_num: np.ndarray | None = None
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.num.shape != (len(self.points), len(self.points)):
            raise InputError("distance matrix shape does not match point count")
        if len(set(self.points)) != len(self.points):
            raise InputError("duplicate point labels")
        self._index.update({p: i for i, p in enumerate(self.points)})

    @property
    def size(self) -> int:
        return len(self.points)

    def has_point(self, label: str) -> bool:
        return label in self._index

    def index(self, point: str | int) -> int:
        if isinstance(point, int):
            if not 0 <= point < self.size:
                raise InputError(f"point index out of range: {point}")
            return point
        try:
            return self._index[point]
        except KeyError:
            raise InputError(f"unknown point label: {point!r}") from None

    def d(self, x: str | int, y: str | int) -> Fraction:
        if not self.exact:
            raise InputError("approximate space has no exact distances")
        return Fraction(int(self.num[self.index(x), self.index(y)]), self.den)

    def d_float(self, x: str | int, y: str | int) -> float:
        return float(self.num[self.index(x), self.index(y)]) / self.den

    def scaled(self) -> tuple[np.ndarray, int]:
        return self.num, self.den


def space_from_table(points: Sequence[str], table: Sequence[Sequence[Fraction]]) -> FiniteMetricSpace:
    """Build a space from a table of rationals (scales to a common denominator)."""
    num, den = scale_rows([[Fraction(v) for v in row] for row in table])
    return FiniteMetricSpace(tuple(points), num, den)


@dataclass(frozen=True)
class MetricViolation:
    kind: str  # symmetry | diagonal | positivity | triangle
    indices: tuple[int, ...]


def verify_metric(space_or_table) -> MetricViolation | None:
    """Exact metric-axiom check; returns the first violation or None.

    Checks, in order: symmetry, zero diagonal, off-diagonal positivity,
    and every triangle inequality.  No tolerances anywhere.
    """
    if isinstance(space_or_table, FiniteMetricSpace):
        if not space_or_table.exact:
            raise InputError("approximate (p=2) spaces are excluded from exact verification")
        num = space_or_table.num
    else:
        rows = [[Fraction(v) for v in row] for row in space_or_table]
        if any(len(row) != len(rows) for row in rows):
            raise InputError("distance matrix must be square")
        num, _ = scale_rows(rows)

    asym = np.nonzero(num != num.T)
    if asym[0].size:
        order = np.lexsort((asym[1], asym[0]))[0]
        return MetricViolation("symmetry", (int(asym[0][order]), int(asym[1][order])))
    diag = np.nonzero(np.diagonal(num) != 0)[0]
    if diag.size:
        return MetricViolation("diagonal", (int(diag[0]),))
    off = num.copy()
    np.fill_diagonal(off, 1)
    nonpos = np.nonzero(off <= 0)
    if nonpos[0].size:
        order = np.lexsort((nonpos[1], nonpos[0]))[0]
        return MetricViolation("positivity", (int(nonpos[0][order]), int(nonpos[1][order])))
    tri = kernels.first_triangle_violation(np.ascontiguousarray(num, dtype=np.int64))
    if tri[0] >= 0:
        return MetricViolation("triangle", (int(tri[0]), int(tri[1]), int(tri[2])))
    return None


def require_metric(space_or_table) -> None:
    violation = verify_metric(space_or_table)
    if violation is not None:
        raise InputError(f"not a metric: {violation.kind} at {violation.indices}")


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple connected-or-not graph with unit-length edges."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]  # index pairs i < j, sorted, deduplicated

    def __post_init__(self):
        n = len(self.vertices)
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise InputError(f"self-loop at vertex {self.vertices[i]!r}")
            if not (0 <= i < n and 0 <= j < n):
                raise InputError("edge endpoint out of range")
            if (i, j) in seen:
                raise InputError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

    @property
    def size(self) -> int:
        return len(self.vertices)

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.size
        deg = np.zeros(n, dtype=np.int64)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.empty(int(indptr[-1]), dtype=np.int64)
        cursor = indptr[:-1].copy()
        for i, j in self.edges:
            indices[cursor[i]] = j
            cursor[i] += 1
            indices[cursor[j]] = i
            cursor[j] += 1
        return indptr, indices


def make_graph(vertices: Sequence[str], edges: Iterable[tuple[str, str]]) -> Graph:
    """Build a Graph from labeled edges (order-insensitive, validated)."""
    verts = tuple(vertices)
    index = {v: i for i, v in enumerate(verts)}
    if len(index) != len(verts):
        raise InputError("duplicate vertex labels")
    pairs = []
    for a, b in edges:
        try:
            i, j = index[a], index[b]
        except KeyError as exc:
            raise InputError(f"edge endpoint not a vertex: {exc.args[0]!r}") from None
        if i == j:
            raise InputError(f"self-loop at vertex {a!r}")
        pairs.append((min(i, j), max(i, j)))
    return Graph(verts, tuple(sorted(set(pairs))))


def shortest_path_metric(g: Graph) -> FiniteMetricSpace:
    """Unit-edge BFS metric of a connected graph."""
    indptr, indices = g.csr()
    dist = kernels.bfs_all_pairs(indptr, indices)
    if (dist < 0).any():
        i, j = np.argwhere(dist < 0)[0]
        raise InputError(
            f"graph is disconnected: no path from {g.vertices[int(i)]!r} "
            f"to {g.vertices[int(j)]!r}"
        )
    return FiniteMetricSpace(g.vertices, dist, 1)


@dataclass(frozen=True)
class SupVector:
    """Vector with exact rational coordinates under the sup norm."""

    labels: tuple[str, ...]
    nums: tuple[int, ...]
    den: int = 1

    @classmethod
    def from_fractions(cls, values: Sequence[Fraction], coord_labels: Sequence[str] | None = None) -> "SupVector":
        values = [Fraction(v) for v in values]
        den = 1
        for v in values:
            den = lcm(den, v.denominator)
        nums = tuple(int(v.numerator * (den // v.denominator)) for v in values)
        if coord_labels is None:
            coord_labels = tuple(str(i + 1) for i in range(len(values)))
        return cls(tuple(coord_labels), nums, int(den))

    @property
    def dim(self) -> int:
        return len(self.nums)

    def value(self, pos: int) -> Fraction:
        return Fraction(self.nums[pos], self.den)

    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.nums)

    def sup_norm(self) -> Fraction:
        if not self.nums:
            return Fraction(0)
        return Fraction(max(abs(n) for n in self.nums), self.den)

    def __sub__(self, other: "SupVector") -> "SupVector":
        if self.labels != other.labels:
            raise InputError("coordinate sets differ")
        if self.den == other.den:
            return SupVector(self.labels, tuple(a - b for a, b in zip(self.nums, other.nums)), self.den)
        return SupVector.from_fractions(
            [a - b for a, b in zip(self.values(), other.values())], self.labels
        )


@dataclass(frozen=True)
class SignedCoordinate:
    """The functional v -> eps * v(s); dual norm one in the sup-norm space."""

    pos: int
    label: str
    eps: int


def norming_coordinate(v: SupVector) -> SignedCoordinate:
    """Signed coordinate attaining the sup norm of v.

    Tie-break: smallest coordinate position; the sign is the sign of the
    entry there (a +1 witness is preferred only in the degenerate case of
    equal absolute values at the same position, which cannot occur).
    """
    if not v.nums or all(n == 0 for n in v.nums):
        raise InputError("cannot norm the zero vector")
    best = max(abs(n) for n in v.nums)
    pos = next(i for i, n in enumerate(v.nums) if abs(n) == best)
    return SignedCoordinate(pos, v.labels[pos], 1 if v.nums[pos] > 0 else -1)


@dataclass(frozen=True, eq=False)
class PointMap:
    """Total map from a finite metric space into sup-norm vectors or a metric target.

    Exactly one of the two image forms is populated:
      * sup-vector images: ``coord_labels`` + ``image_num``/``image_den``
        (row i is the image of source point i), or
      * metric-target images: ``target`` + ``assignment`` (source index ->
        target index).
    """

    source: FiniteMetricSpace
    coord_labels: tuple[str, ...] | None = None
    image_num: np.ndarray | None = None
    image_den: int = 1
    target: FiniteMetricSpace | None = None
    assignment: tuple[int, ...] | None = None

    def __post_init__(self):
        sup_form = self.image_num is not None
        tgt_form = self.target is not None
        if sup_form == tgt_form:
            raise InputError("point map needs exactly one image form")
        if sup_form:
            if self.coord_labels is None or self.image_num.shape != (
                self.source.size,
                len(self.coord_labels),
            ):
                raise InputError("image matrix shape does not match source/coordinates")
        else:
            if self.assignment is None or len(self.assignment) != self.source.size:
                raise InputError("assignment must cover every source point")
            if not self.target.exact:
                raise InputError("approximate target spaces are not supported")

    @property
    def is_sup(self) -> bool:
        return self.image_num is not None

    def image_vector(self, point: str | int) -> SupVector:
        if not self.is_sup:
            raise InputError("map does not have sup-norm images")
        i = self.source.index(point)
        return SupVector(self.coord_labels, tuple(int(x) for x in self.image_num[i]), self.image_den)

    def image_distance(self, x: str | int, y: str | int) -> Fraction:
        i, j = self.source.index(x), self.source.index(y)
        if self.is_sup:
            row = np.abs(self.image_num[i].astype(np.int64) - self.image_num[j].astype(np.int64))
            return Fraction(int(row.max()) if row.size else 0, self.image_den)
        return Fraction(
            int(self.target.num[self.assignment[i], self.assignment[j]]), self.target.den
        )

    def image_pair_matrix(self) -> tuple[np.ndarray, int]:
        """Scaled matrix of pairwise image distances."""
        if self.is_sup:
            img = np.ascontiguousarray(self.image_num, dtype=np.int64)
            if not check_kernel_magnitude(img):
                raise InputError("image coordinates too large for exact kernels")
            return kernels.pairwise_sup(img), self.image_den
        sel = np.asarray(self.assignment, dtype=np.int64)
        return self.target.num[np.ix_(sel, sel)].astype(np.int64), self.target.den

    def scaled_images(self) -> tuple[np.ndarray, int]:
        if not self.is_sup:
            raise InputError("map does not have sup-norm images")
        return self.image_num, self.image_den


def identity_map(source: FiniteMetricSpace, target: FiniteMetricSpace) -> PointMap:
    """Identity on labels between two metrics on the same point set."""
    assignment = tuple(target.index(p) for p in source.points)
    return PointMap(source=source, target=target, assignment=assignment)


def assignment_map(source: FiniteMetricSpace, target: FiniteMetricSpace, images: Mapping[str, str]) -> PointMap:
    assignment = tuple(target.index(images[p]) for p in source.points)
    return PointMap(source=source, target=target, assignment=assignment)


def sup_map(source: FiniteMetricSpace, coord_labels: Sequence[str], rows: Sequence[Sequence[Fraction]]) -> PointMap:
    num, den = scale_rows([[Fraction(v) for v in row] for row in rows])
    return PointMap(source=source, coord_labels=tuple(coord_labels), image_num=num, image_den=den)


@dataclass(frozen=True)
class DistortionReport:
    """Extreme pair ratios of a bi-Lipschitz map.

    ``c1``/``c2`` are the minimum and maximum over distinct pairs of the
    ratio source-distance / image-distance, with the witnessing pairs; so
    c1 * d_image <= d_source <= c2 * d_image holds exactly and
    ``dist = c2 / c1`` is the distortion.  The reciprocal view (image over
    source) is exposed as ``min_expansion``/``max_expansion``.
    """

    c1: Fraction
    c2: Fraction
    dist: Fraction
    c1_pair: tuple[str, str]
    c2_pair: tuple[str, str]

    @property
    def min_expansion(self) -> Fraction:
        return 1 / self.c2

    @property
    def max_expansion(self) -> Fraction:
        return 1 / self.c1


def distortion(f: PointMap) -> DistortionReport:
    """Exact distortion of a point map (source must have >= 2 points)."""
    src_space = f.source
    if src_space.size < 2:
        raise InputError("distortion needs at least two source points")
    if not src_space.exact:
        raise InputError("approximate source spaces are excluded from exact distortion")
    src, src_den = src_space.scaled()
    img, img_den = f.image_pair_matrix()

    off = img.copy()
    np.fill_diagonal(off, 1)
    if (off == 0).any():
        i, j = np.argwhere(off == 0)[0]
        raise InputError(
            "not bi-Lipschitz: points "
            f"{src_space.points[int(i)]!r} and {src_space.points[int(j)]!r} share an image"
        )
    src64 = np.ascontiguousarray(src, dtype=np.int64)
    if check_kernel_magnitude(src64, img):
        i1, j1, i2, j2 = (int(x) for x in kernels.ratio_extremes(src64, img))
    else:
        i1, j1, i2, j2 = _ratio_extremes_fractions(src64, img)

    def ratio(i, j):
        return Fraction(int(src[i, j]) * img_den, int(img[i, j]) * src_den)

    c1, c2 = ratio(i1, j1), ratio(i2, j2)
    return DistortionReport(
        c1=c1,
        c2=c2,
        dist=c2 / c1,
        c1_pair=(src_space.points[i1], src_space.points[j1]),
        c2_pair=(src_space.points[i2], src_space.points[j2]),
    )


def _ratio_extremes_fractions(src, img):
    # arbitrary-precision fallback when entries exceed the int64 guard
    n = src.shape[0]
    lo = hi = None
    out = [0, 0, 0, 0]
    for i in range(n):
        for j in range(i + 1, n):
            r = Fraction(int(src[i, j]), int(img[i, j]))
            if lo is None or r < lo:
                lo, out[0], out[1] = r, i, j
            if hi is None or r > hi:
                hi, out[2], out[3] = r, i, j
    return tuple(out)


def kuratowski_embed(m: FiniteMetricSpace, base: str | int) -> PointMap:
    """Isometric embedding x -> (d(x, s) - d(base, s))_s into sup-norm coordinates.

    Coordinates are indexed by the points of the space; the base point maps
    to the zero vector.
    """
    if not m.exact:
        raise InputError("approximate spaces cannot be embedded exactly")
    b = m.index(base)
    num = m.num
    if num.dtype != np.int64 and 2 * int(np.abs(num).max()) >= np.iinfo(num.dtype).max:
        num = num.astype(np.int64)
    img = num - num[b][None, :]
    return PointMap(source=m, coord_labels=m.points, image_num=img, image_den=m.den)


def james_gap(f: PointMap, n: int) -> Fraction:
    """Uniform gap between initial and tail image points of an M_R truncation.

    Picks the norming signed coordinate of f([1..n]) - f([n+1..]) and
    returns min_{k <= n} x*(f(k)) - max_{n < k <= N} x*(f(k)).  For a map
    with lower scale 1 and upper scale D this is at least 4 - 2D.
    """
    if not f.is_sup:
        raise InputError("james_gap needs sup-norm images")
    src = f.source
    cap = 0
    while src.has_point(labels.int_label(cap + 1)):
        cap += 1
    if cap < 2:
        raise InputError("source does not look like an M_R truncation")
    if not 1 <= n < cap:
        raise InputError(f"n must satisfy 1 <= n < {cap}, got {n}")
    zero = f.image_vector(labels.ZERO)
    if any(v != 0 for v in zero.nums):
        raise InputError("map must send the hub vertex to 0")
    seg = f.image_vector(labels.init_label(n))
    tail = f.image_vector(labels.tail_label(n + 1))
    x_star = norming_coordinate(seg - tail)

    def dual(k: int) -> Fraction:
        vec = f.image_vector(labels.int_label(k))
        return x_star.eps * vec.value(x_star.pos)

    inner = min(dual(k) for k in range(1, n + 1))
    outer = max(dual(k) for k in range(n + 1, cap + 1))
    return inner - outer
