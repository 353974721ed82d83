"""JSON formats for spaces, point maps, set families, certificates, envelopes.

Rationals serialize as bare integers or canonical "p/q" strings; subset
bitmasks as lowercase hex with bit i standing for element i+1.  Output is
canonical (sorted keys, compact separators) so identical inputs produce
identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InputError, VerificationError
from .extraction import ExtractionResult, SeparationCertificate
from .metric import DistortionReport, FiniteMetricSpace, PointMap, SignedCoordinate
from .rational import format_rational, parse_rational, scale_rows
from .shattering import SetFamily


def dumps_canonical(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def load_json_file(path: str | Path):
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None


def space_to_json(space: FiniteMetricSpace) -> dict:
    if not space.exact:
        return {
            "points": list(space.points),
            "dist_sq": [[int(v) for v in row] for row in space.sq_num],
            "metric": "l2-squared",
        }
    return {
        "points": list(space.points),
        "dist": [
            [format_rational(Fraction(int(v), space.den)) for v in row] for row in space.num
        ],
    }


def space_from_json(obj, where: str = "space") -> FiniteMetricSpace:
    if not isinstance(obj, dict) or "points" not in obj:
        raise InputError(f"{where}: expected an object with 'points'")
    points = obj["points"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise InputError(f"{where}: 'points' must be a list of labels")
    if "dist_sq" in obj:
        sq = np.array(obj["dist_sq"], dtype=np.int64)
        if sq.shape != (len(points), len(points)):
            raise InputError(f"{where}: 'dist_sq' must be square over the points")
        return FiniteMetricSpace(
            tuple(points), np.sqrt(sq.astype(np.float64)), exact=False, sq_num=sq
        )
    table = obj.get("dist")
    if not isinstance(table, list) or len(table) != len(points):
        raise InputError(f"{where}: 'dist' must be a square matrix over the points")
    rows = []
    for i, row in enumerate(table):
        if not isinstance(row, list) or len(row) != len(points):
            raise InputError(f"{where}: row {i} of 'dist' has the wrong length")
        rows.append([parse_rational(v) for v in row])
    num, den = scale_rows(rows)
    return FiniteMetricSpace(tuple(points), num, den)


def pointmap_to_json(pm: PointMap, inline_source: bool = True, source_ref: str | None = None) -> dict:
    if not pm.is_sup:
        raise InputError("only sup-norm point maps serialize to the map format")
    images = {}
    for i, p in enumerate(pm.source.points):
        images[p] = [
            format_rational(Fraction(int(v), pm.image_den)) for v in pm.image_num[i]
        ]
    return {
        "source": space_to_json(pm.source) if inline_source else source_ref,
        "coords": list(pm.coord_labels),
        "images": images,
    }


def pointmap_from_json(obj, base_dir: Path | None = None, source_override: FiniteMetricSpace | None = None) -> PointMap:
    if not isinstance(obj, dict) or "images" not in obj:
        raise InputError("point map: expected an object with 'images'")
    if source_override is not None:
        source = source_override
    else:
        ref = obj.get("source")
        if isinstance(ref, str):
            path = Path(ref)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            source = space_from_json(load_json_file(path), where=str(path))
        elif isinstance(ref, dict):
            source = space_from_json(ref, where="inline source")
        else:
            raise InputError("point map: 'source' must be a path or an inline space")
    images = obj["images"]
    if set(images) != set(source.points):
        missing = set(source.points) - set(images)
        extra = set(images) - set(source.points)
        raise InputError(
            f"point map images do not cover the source exactly "
            f"(missing {sorted(missing)[:3]}, extra {sorted(extra)[:3]})"
        )
    first = images[source.points[0]]
    dim = len(first)
    coords = obj.get("coords", [str(i + 1) for i in range(dim)])
    if len(coords) != dim or len(set(coords)) != dim:
        raise InputError("point map: 'coords' must be distinct and match the image length")
    rows = []
    for p in source.points:
        row = images[p]
        if len(row) != dim:
            raise InputError(f"point map: image of {p!r} has length {len(row)}, wanted {dim}")
        rows.append([parse_rational(v) for v in row])
    num, den = scale_rows(rows)
    return PointMap(source=source, coord_labels=tuple(coords), image_num=num, image_den=den)


def report_to_json(rep: DistortionReport) -> dict:
    return {
        "C1": format_rational(rep.c1),
        "C2": format_rational(rep.c2),
        "dist": format_rational(rep.dist),
        "C1_pair": list(rep.c1_pair),
        "C2_pair": list(rep.c2_pair),
    }


def family_to_json(fam: SetFamily) -> dict:
    return {"k": fam.k, "members": sorted(format(m, "x") for m in fam.members)}


def family_from_json(obj) -> SetFamily:
    if not isinstance(obj, dict) or "k" not in obj or "members" not in obj:
        raise InputError("set family: expected an object with 'k' and 'members'")
    try:
        masks = [int(m, 16) for m in obj["members"]]
    except (TypeError, ValueError):
        raise InputError("set family: members must be hex bitmask strings") from None
    return SetFamily.from_masks(int(obj["k"]), masks)


def certificate_to_json(cert: SeparationCertificate, selected=None) -> dict:
    try:
        h = [int(lab) for lab in cert.member_labels]
    except ValueError:
        raise InputError("only certificates over integer-labeled members serialize") from None
    if selected is not None:
        h = list(selected)
    return {
        "r": format_rational(cert.r),
        "delta": format_rational(cert.delta),
        "K": format_rational(cert.K),
        "ratio": format_rational(cert.ratio),
        "H": h,
        "witnesses": {
            format(mask, "x"): {"s": w.label, "eps": w.eps}
            for mask, w in sorted(cert.witnesses.items())
        },
    }


def certificate_from_json(obj) -> SeparationCertificate:
    for key in ("r", "delta", "K", "ratio", "H", "witnesses"):
        if not isinstance(obj, dict) or key not in obj:
            raise InputError(f"certificate: missing field {key!r}")
    member_labels = tuple(str(int(i)) for i in obj["H"])
    witnesses = {}
    for hexmask, w in obj["witnesses"].items():
        try:
            mask = int(hexmask, 16)
        except ValueError:
            raise InputError(f"certificate: bad witness mask {hexmask!r}") from None
        eps = w.get("eps")
        if eps not in (1, -1):
            raise InputError(f"certificate: witness sign must be +-1, got {eps!r}")
        witnesses[mask] = SignedCoordinate(pos=-1, label=str(w.get("s")), eps=eps)
    cert = SeparationCertificate(
        r=parse_rational(obj["r"]),
        delta=parse_rational(obj["delta"]),
        K=parse_rational(obj["K"]),
        member_labels=member_labels,
        witnesses=witnesses,
    )
    if cert.ratio != parse_rational(obj["ratio"]):
        raise VerificationError(
            f"certificate ratio field {obj['ratio']!r} does not equal 2K/delta"
        )
    return cert


def extraction_to_json(result: ExtractionResult, include_audit: bool = False) -> dict:
    payload = certificate_to_json(result.certificate, selected=result.selected)
    if include_audit:
        audit = dict(result.audit)
        for key, value in audit.items():
            if isinstance(value, Fraction):
                audit[key] = format_rational(value)
            elif isinstance(value, tuple):
                audit[key] = [format_rational(v) for v in value]
            elif isinstance(value, dict):
                audit[key] = {str(k): v for k, v in value.items()}
        payload["audit"] = audit
    return payload


def digest_file(path: str | Path) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def envelope(command: str, input_paths: dict[str, str | Path], payload, status: str = "ok") -> dict:
    return {
        "command": command,
        "inputs": {name: digest_file(p) for name, p in sorted(input_paths.items())},
        "payload": payload,
        "status": status,
    }
