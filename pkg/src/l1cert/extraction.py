"""Separation certificates and the constructive l1-basis extraction pipelines.

The central object is the separation certificate: for a family
f_1, ..., f_n of sup-norm vectors, thresholds r < r + delta, and every
subset A of [1..n], a signed coordinate x* with

    x*(f_j) <= r  for j outside A      and      r + delta <= x*(f_i)  for i in A.

Such a family is 2K/delta-equivalent to the unit vector basis of l1^n
(K the largest sup norm), with delta/2 the certified lower constant.  The
two pipelines assemble certificates from embeddings of the hub-and-sets
graphs: the direct route norms every partition difference f(A) - f(B) and
works for declared distortion D < 4/3; the threshold route classifies the
partitions into c-1 pigeonhole classes, extracts a shattered index set
from the largest class, and works for D < 2 at the cost of shrinking the
extracted dimension to ceil(eta * k).

Every inequality is re-checkable: certificates store their witnesses, and
``validate_certificate`` re-runs all of them in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from . import labels
from .calculators import min_k, threshold_count
from .errors import InputError, InternalInvariantError, SeparationFailure, VerificationError
from .metric import (
    PointMap,
    SignedCoordinate,
    SupVector,
    distortion,
    norming_coordinate,
)
from .rational import check_kernel_magnitude
from .backend import kernels
from .shattering import SetFamily, eta, sauer_shelah_extract, shatters

# Above this source size the full pairwise distortion pre-check is replaced
# by the per-witness inequalities that the pipeline verifies anyway.
FULL_CHECK_LIMIT = 1200

_BIG = np.int64(1) << 62


@dataclass(frozen=True, eq=False)
class VectorFamily:
    """Ordered family of sup-norm vectors over one scaled-integer matrix."""

    member_labels: tuple[str, ...]
    coord_labels: tuple[str, ...]
    num: np.ndarray  # int64 [n, dim]
    den: int

    def __post_init__(self):
        if self.num.shape != (len(self.member_labels), len(self.coord_labels)):
            raise InputError("family matrix shape mismatch")

    @classmethod
    def from_vectors(cls, vectors: Sequence[SupVector], member_labels: Sequence[str] | None = None) -> "VectorFamily":
        if not vectors:
            raise InputError("empty family")
        coords = vectors[0].labels
        if any(v.labels != coords for v in vectors):
            raise InputError("family vectors use different coordinate sets")
        den = 1
        for v in vectors:
            den = lcm(den, v.den)
        num = np.array(
            [[n * (den // v.den) for n in v.nums] for v in vectors], dtype=np.int64
        )
        if member_labels is None:
            member_labels = tuple(str(i + 1) for i in range(len(vectors)))
        return cls(tuple(member_labels), coords, num, den)

    @property
    def n(self) -> int:
        return len(self.member_labels)

    def vector(self, i: int) -> SupVector:
        return SupVector(self.coord_labels, tuple(int(x) for x in self.num[i]), self.den)

    def max_sup_norm(self) -> Fraction:
        return Fraction(int(np.abs(self.num).max()) if self.num.size else 0, self.den)


def _as_family(family) -> VectorFamily:
    if isinstance(family, VectorFamily):
        return family
    return VectorFamily.from_vectors(list(family))


@dataclass(frozen=True)
class SeparationCertificate:
    """Per-subset witnesses of the threshold separation r < r + delta.

    ``witnesses`` maps each subset bitmask over the family order (bit t-1
    is the t-th member) to its signed coordinate.  ``ratio`` = 2K/delta is
    the certified l1-basis equivalence constant, ``delta/2`` the lower one.
    """

    r: Fraction
    delta: Fraction
    K: Fraction
    member_labels: tuple[str, ...]
    witnesses: dict[int, SignedCoordinate]

    def __post_init__(self):
        if self.delta <= 0:
            raise InputError("delta must be positive")

    @property
    def n(self) -> int:
        return len(self.member_labels)

    @property
    def ratio(self) -> Fraction:
        return 2 * self.K / self.delta

    @property
    def lower_constant(self) -> Fraction:
        return self.delta / 2


def certified_lower_constant(cert: SeparationCertificate) -> Fraction:
    """The proven lower l1-basis constant delta/2 of a valid certificate."""
    return cert.lower_constant


def certify_separation(family, r: Fraction, delta: Fraction) -> SeparationCertificate:
    """Search a witness coordinate for every subset of the family.

    Scans signed coordinates in coordinate order (positive sign first) and
    keeps the first witness per subset; raises SeparationFailure with the
    first subset that has none.
    """
    fam = _as_family(family)
    n, dim = fam.n, len(fam.coord_labels)
    r, delta = Fraction(r), Fraction(delta)
    if delta <= 0:
        raise InputError("delta must be positive")
    if n > 20:
        raise InputError("family too large for the 2^n witness sweep (n <= 20)")

    rd = lcm(r.denominator, (r + delta).denominator)
    lo_thresh = int(r * rd) * fam.den
    hi_thresh = int((r + delta) * rd) * fam.den
    scaled = fam.num.astype(np.int64) * rd
    if not check_kernel_magnitude(scaled):
        raise InputError("family values too large for exact integer comparisons")

    weights = (np.int64(1) << np.arange(n, dtype=np.int64))[:, None]
    full = (1 << n) - 1
    # witness order: coordinate 0 with +1, coordinate 0 with -1, coordinate 1 ...
    hi_masks = np.empty(2 * dim, dtype=np.int64)
    lo_masks = np.empty(2 * dim, dtype=np.int64)
    for sign_slot, sgn in enumerate((1, -1)):
        vals = sgn * scaled
        hi_masks[sign_slot::2] = ((vals >= hi_thresh) * weights).sum(axis=0)
        lo_masks[sign_slot::2] = ((vals <= lo_thresh) * weights).sum(axis=0)

    witnesses: dict[int, SignedCoordinate] = {}
    for mask in range(1 << n):
        comp = full ^ mask
        ok = ((mask & ~hi_masks) == 0) & ((comp & ~lo_masks) == 0)
        hits = np.nonzero(ok)[0]
        if hits.size == 0:
            raise SeparationFailure(mask)
        slot = int(hits[0])
        pos, sgn = divmod(slot, 2)
        witnesses[mask] = SignedCoordinate(pos, fam.coord_labels[pos], 1 if sgn == 0 else -1)
    return SeparationCertificate(
        r=r,
        delta=delta,
        K=fam.max_sup_norm(),
        member_labels=fam.member_labels,
        witnesses=witnesses,
    )


def validate_certificate(cert: SeparationCertificate, family) -> None:
    """Exact re-check of every witness inequality, K, and completeness."""
    fam = _as_family(family)
    if fam.member_labels != cert.member_labels:
        raise VerificationError("certificate family labels do not match the map")
    n = fam.n
    total = 1 << n
    if set(cert.witnesses) != set(range(total)):
        raise VerificationError("certificate does not cover every subset")
    if fam.max_sup_norm() != cert.K:
        raise VerificationError(
            f"K mismatch: certificate says {cert.K}, family has {fam.max_sup_norm()}"
        )
    coord_index = {lab: i for i, lab in enumerate(fam.coord_labels)}
    rd = lcm(cert.r.denominator, (cert.r + cert.delta).denominator)
    lo_thresh = int(cert.r * rd) * fam.den
    hi_thresh = int((cert.r + cert.delta) * rd) * fam.den
    scaled = fam.num.astype(np.int64) * rd

    for mask in range(total):
        w = cert.witnesses[mask]
        if w.eps not in (1, -1):
            raise VerificationError(f"bad witness sign for mask {mask:#x}")
        pos = coord_index.get(w.label, w.pos)
        if not 0 <= pos < scaled.shape[1]:
            raise VerificationError(f"witness coordinate out of range for mask {mask:#x}")
        vals = w.eps * scaled[:, pos]
        for i in range(n):
            if mask >> i & 1:
                if vals[i] < hi_thresh:
                    raise VerificationError(
                        f"witness for mask {mask:#x} fails the upper bound at member {i + 1}"
                    )
            elif vals[i] > lo_thresh:
                raise VerificationError(
                    f"witness for mask {mask:#x} fails the lower bound at member {i + 1}"
                )


def _signed_compositions(total: int, slots: int):
    if slots == 1:
        if total == 0:
            yield (0,)
        else:
            yield (total,)
            yield (-total,)
        return
    for head in range(-total, total + 1):
        for rest in _signed_compositions(total - abs(head), slots - 1):
            yield (head, *rest)


def lower_constant_grid(family, mesh: int) -> tuple[Fraction, Fraction]:
    """Brute-force enclosure of min { ||sum c_i f_i|| : sum |c_i| = 1 }.

    Evaluates every integer point z with sum |z_i| = mesh, giving the grid
    minimum ``hi``; the sup norm is K-Lipschitz in the coefficients and the
    grid is 2n/mesh-dense in the l1 sphere, so ``lo = hi - 2Kn/mesh`` is a
    certified lower bound.  Independent of the certificate route.
    """
    fam = _as_family(family)
    if fam.n > 6:
        raise InputError("grid oracle budget: at most 6 family members")
    if mesh < 4:
        raise InputError("mesh must be >= 4")
    zs = np.array(list(_signed_compositions(mesh, fam.n)), dtype=np.int64)
    fmat = fam.num.astype(np.int64)
    if not check_kernel_magnitude(fmat):
        raise InputError("family values too large for the grid oracle")
    best = int(kernels.grid_min_abs(zs, fmat))
    hi = Fraction(best, fam.den * mesh)
    k_const = fam.max_sup_norm()
    lo = hi - 2 * k_const * fam.n / Fraction(mesh)
    return lo, hi


@dataclass(frozen=True)
class Thresholds:
    """Ascending threshold grid r_j = -D + j(2-D), j = 1..c."""

    D: Fraction
    c: int
    values: tuple[Fraction, ...]

    @property
    def spacing(self) -> Fraction:
        return 2 - self.D


def thresholds(d_const: Fraction) -> Thresholds:
    """Threshold grid for the pigeonhole route; requires 6/5 <= D < 2.

    Verifies on a fine grid of interval endpoints that every closed
    subinterval of [-D, D] of length 4-2D contains at least two r_j.
    """
    d_const = Fraction(d_const)
    if not Fraction(6, 5) <= d_const < 2:
        raise InputError("D must lie in [6/5, 2)")
    c = threshold_count(d_const)
    vals = tuple(-d_const + j * (2 - d_const) for j in range(1, c + 1))
    if c < 2 or vals[0] <= -d_const or vals[-1] > d_const:
        raise InternalInvariantError("threshold grid escaped [-D, D]")
    window = 4 - 2 * d_const
    step = (2 - d_const) / 8
    t_max = 2 * d_const - window
    probes = []
    t = Fraction(0)
    while t < t_max:
        probes.append(t)
        t += step
    probes.append(t_max)
    for t in probes:
        lo = -d_const + t
        hi = lo + window
        if sum(1 for v in vals if lo <= v <= hi) < 2:
            raise InternalInvariantError(f"interval [{lo}, {hi}] misses two thresholds")
    return Thresholds(d_const, c, vals)


@dataclass(frozen=True)
class ExtractionResult:
    """Outcome of an extraction pipeline: indices, certificate, audit trail."""

    selected: tuple[int, ...]
    certificate: SeparationCertificate
    ratio: Fraction
    audit: dict


def _hub_sets_structure(f: PointMap) -> tuple[int, np.ndarray, np.ndarray]:
    """Locate integer and subset vertices of a finite hub-and-sets source."""
    src = f.source
    if not f.is_sup:
        raise InputError("pipelines need sup-norm images")
    n = 0
    while src.has_point(labels.int_label(n + 1)):
        n += 1
    if n < 1 or not src.has_point(labels.ZERO):
        raise InputError("source is not a hub-and-sets space")
    expected = 1 + n + (1 << n) - 1
    if src.size != expected:
        raise InputError(
            f"source has {src.size} points, a ground-{n} hub-and-sets space has {expected}"
        )
    try:
        set_rows = np.array(
            [src.index(labels.set_label(mask)) for mask in range(1, 1 << n)], dtype=np.int64
        )
    except InputError:
        raise InputError("source is missing subset vertices") from None
    int_rows = np.array([src.index(labels.int_label(a)) for a in range(1, n + 1)], dtype=np.int64)
    zero_row = f.image_num[src.index(labels.ZERO)]
    if np.any(zero_row != 0):
        raise InputError("map must send the hub vertex to 0")
    return n, int_rows, set_rows


def _maybe_full_distortion_check(f: PointMap, d_const: Fraction, check: bool | None) -> bool:
    if check is None:
        check = f.source.size <= FULL_CHECK_LIMIT
    if not check:
        return False
    rep = distortion(f)
    if rep.min_expansion < 1 or rep.max_expansion > d_const:
        raise InputError(
            f"map is not a [1, {d_const}] embedding: expansion ranges over "
            f"[{rep.min_expansion}, {rep.max_expansion}]"
        )
    return True


def _partition_witnesses(f: PointMap, n: int, set_rows: np.ndarray):
    den = f.image_den
    sets = np.ascontiguousarray(f.image_num[set_rows])
    if not check_kernel_magnitude(sets):
        raise InputError("image coordinates too large for exact kernels")
    s_idx, eps, nval = kernels.partition_normings(sets, n)
    full = (1 << n) - 1
    need_two = 2 * den
    need_four = 4 * den
    for mask in (0, full):
        if nval[mask] < need_two:
            raise InputError(
                "embedding inequality violated: ||f(full set)|| < 2 "
                "(the declared distortion bound cannot hold)"
            )
    interior = np.arange(1, full)
    bad = interior[nval[interior] < need_four]
    if bad.size:
        raise InputError(
            f"embedding inequality violated at partition mask {int(bad[0]):#x}: "
            "||f(A) - f(B)|| < 4 for disjoint set vertices"
        )
    return s_idx, eps, nval


def extract_thm4a(f: PointMap, d_const: Fraction, check_distortion: bool | None = None) -> ExtractionResult:
    """Direct extraction: full l1^n basis from a distortion-D embedding, D < 4/3.

    Every partition (A, complement) contributes the norming coordinate of
    f(A) - f(complement) as the witness for A, with thresholds
    r = 3D - 4, delta = 2(4 - 3D); the assembled certificate is re-validated
    exactly before returning.  Ratio is at most D / (4 - 3D).
    """
    d_const = Fraction(d_const)
    if not 1 <= d_const < Fraction(4, 3):
        raise InputError("D must lie in [1, 4/3)")
    n, int_rows, set_rows = _hub_sets_structure(f)
    _maybe_full_distortion_check(f, d_const, check_distortion)
    s_idx, eps, _ = _partition_witnesses(f, n, set_rows)

    fam = VectorFamily(
        tuple(labels.int_label(a) for a in range(1, n + 1)),
        f.coord_labels,
        f.image_num[int_rows].astype(np.int64),
        f.image_den,
    )
    if fam.max_sup_norm() > d_const:
        raise InputError(
            f"||f(a)|| exceeds D = {d_const}; the declared distortion bound is violated"
        )
    witnesses = {
        mask: SignedCoordinate(int(s_idx[mask]), f.coord_labels[int(s_idx[mask])], int(eps[mask]))
        for mask in range(1 << n)
    }
    cert = SeparationCertificate(
        r=3 * d_const - 4,
        delta=2 * (4 - 3 * d_const),
        K=fam.max_sup_norm(),
        member_labels=fam.member_labels,
        witnesses=witnesses,
    )
    try:
        validate_certificate(cert, fam)
    except VerificationError as exc:
        raise InputError(
            f"certificate assembly failed ({exc}); the declared distortion bound is violated"
        ) from None
    ratio = cert.ratio
    if ratio > d_const / (4 - 3 * d_const):
        raise InternalInvariantError("ratio exceeded the guaranteed bound")
    return ExtractionResult(
        selected=tuple(range(1, n + 1)),
        certificate=cert,
        ratio=ratio,
        audit={"theorem": "4a", "D": d_const, "n": n},
    )


def _threshold_classify(f: PointMap, d_const: Fraction):
    """Norming witnesses and the smallest separating threshold index per partition."""
    k, int_rows, set_rows = _hub_sets_structure(f)
    th = thresholds(d_const)
    s_idx, eps, _ = _partition_witnesses(f, k, set_rows)

    den = f.image_den
    rd = d_const.denominator
    peak = max(abs(int(f.image_num.max())), abs(int(f.image_num.min())))
    if peak * rd >= 1 << 62:
        raise InputError("image coordinates too large for the threshold sweep")
    r_scaled = np.array([int(v * rd) * den for v in th.values], dtype=np.int64)
    d_scaled = int(d_const * rd) * den

    # dual values eps_A * f(i)(s_A), scaled by the threshold denominator
    cols = f.image_num[int_rows][:, s_idx].astype(np.int64)
    vals = (eps.astype(np.int64)[None, :] * cols).T * rd  # [2^k, k]
    if np.abs(vals).max(initial=0) > d_scaled:
        a_bad, i_bad = np.argwhere(np.abs(vals) > d_scaled)[0]
        raise InputError(
            f"witness value outside [-D, D] at partition {int(a_bad):#x}, member {int(i_bad) + 1}; "
            "the declared distortion bound is violated"
        )
    total = 1 << k
    masks = np.arange(total, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(k, dtype=np.int64)) & 1).astype(bool)
    min_a = np.where(bits, vals, _BIG).min(axis=1)
    max_b = np.where(~bits, vals, -_BIG).max(axis=1)
    valid = (max_b[:, None] <= r_scaled[None, : th.c - 1]) & (
        min_a[:, None] >= r_scaled[None, 1: th.c]
    )
    if not valid.any(axis=1).all():
        a_bad = int(np.nonzero(~valid.any(axis=1))[0][0])
        raise InputError(
            f"no threshold pair separates partition {a_bad:#x}; "
            "the declared distortion bound is violated"
        )
    j_class = np.argmax(valid, axis=1)  # smallest valid j (0-based)
    return k, int_rows, th, s_idx, eps, j_class


def partition_classes(f: PointMap, d_const: Fraction) -> np.ndarray:
    """1-based threshold class j_A of every partition bitmask (array of 2^k).

    Exposed so the pigeonhole classes can be rebuilt and re-audited
    independently of the pipeline.
    """
    d_const = Fraction(d_const)
    if not Fraction(6, 5) <= d_const < 2:
        raise InputError("D must lie in [6/5, 2)")
    *_, j_class = _threshold_classify(f, d_const)
    return j_class + 1


def extract_thm4b(
    f: PointMap,
    d_const: Fraction,
    alpha: Fraction,
    allow_proof_bound: bool = False,
    check_distortion: bool | None = None,
) -> ExtractionResult:
    """Threshold extraction: l1^(ceil(eta*k)) basis from a distortion-D embedding, D < 2.

    Classifies every partition by the lowest threshold pair separating its
    witness values, pigeonholes to the largest class, extracts a shattered
    index set H from it, and certifies the family (f(i)) for i in H with
    r = r_j, delta = 2 - D.  Ratio is at most 2D / (2 - D).
    """
    d_const, alpha = Fraction(d_const), Fraction(alpha)
    if not Fraction(6, 5) <= d_const < 2:
        raise InputError("D must lie in [6/5, 2)")
    if not 0 < alpha < 1:
        raise InputError("alpha must lie in (0, 1)")
    k_probe, _, _ = _hub_sets_structure(f)
    statement_k, proof_k = min_k(d_const, alpha)
    required = proof_k if allow_proof_bound else statement_k
    if k_probe < required:
        raise InputError(
            f"ground size k={k_probe} is below the required bound {required} "
            f"(statement {statement_k}, proof {proof_k})"
        )
    _maybe_full_distortion_check(f, d_const, check_distortion)
    k, int_rows, th, _, _, j_class = _threshold_classify(f, d_const)
    total = 1 << k

    counts = np.bincount(j_class, minlength=th.c - 1)
    j_star = int(np.argmax(counts))  # smallest class index among the largest
    class_size = int(counts[j_star])
    floor_bound = -((-total) // (th.c - 1))  # ceil(2^k / (c-1))
    if class_size < floor_bound:
        raise InternalInvariantError("pigeonhole class smaller than 2^k/(c-1)")
    p, q = alpha.numerator, alpha.denominator
    if class_size**q < 1 << (p * k):
        raise InternalInvariantError("largest class fell below 2^(alpha k)")

    eta_val = eta(alpha)
    m = -((eta_val.numerator * k) // -eta_val.denominator)  # ceil(eta * k)
    chosen_class = SetFamily.from_masks(k, np.nonzero(j_class == j_star)[0].tolist())
    h_mask = sauer_shelah_extract(chosen_class, m)
    if h_mask is None or not shatters(chosen_class, h_mask):
        raise InternalInvariantError("shattered-set extraction failed despite the bound")
    h_indices = tuple(i + 1 for i in range(k) if h_mask >> i & 1)

    fam = VectorFamily(
        tuple(labels.int_label(i) for i in h_indices),
        f.coord_labels,
        f.image_num[int_rows[[i - 1 for i in h_indices]]].astype(np.int64),
        f.image_den,
    )
    if fam.max_sup_norm() > d_const:
        raise InputError("||f(i)|| exceeds D; the declared distortion bound is violated")
    try:
        cert = certify_separation(fam, th.values[j_star], 2 - d_const)
    except SeparationFailure as exc:
        raise InternalInvariantError(f"certificate search failed: {exc}") from exc
    ratio = cert.ratio
    if ratio > 2 * d_const / (2 - d_const):
        raise InternalInvariantError("ratio exceeded the guaranteed bound")
    return ExtractionResult(
        selected=h_indices,
        certificate=cert,
        ratio=ratio,
        audit={
            "theorem": "4b",
            "D": d_const,
            "alpha": alpha,
            "eta": eta_val,
            "k": k,
            "k_bound_mode": "proof" if allow_proof_bound else "statement",
            "k_required": required,
            "class_sizes": {j + 1: int(c) for j, c in enumerate(counts)},
            "chosen_j": j_star + 1,
            "pigeonhole_min": floor_bound,
            "thresholds": th.values,
            "shattered_mask": h_mask,
        },
    )


__all__ = [
    "VectorFamily",
    "SeparationCertificate",
    "SignedCoordinate",
    "norming_coordinate",
    "certify_separation",
    "certified_lower_constant",
    "validate_certificate",
    "lower_constant_grid",
    "Thresholds",
    "thresholds",
    "ExtractionResult",
    "extract_thm4a",
    "extract_thm4b",
    "partition_classes",
]
