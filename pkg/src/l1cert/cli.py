"""Command-line front door: build spaces, run pipelines, emit and verify certificates.

Every command writes one canonical JSON payload (sorted keys, compact) to
stdout or --out, so identical inputs give identical bytes.  Exit codes:
0 success, 2 bad input or precondition, 3 failed certificate verification.

Space and map arguments accept either JSON files or generator shorthands:

    gen:m-ell1:4     gen:m-r:6      gen:cube:3:1     gen:rho:m-ell1:4
    gen:kuratowski[:BASE]           gen:phi:6
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import calculators, serialize, spaces, stability
from .backend import active_backend
from .errors import InputError, L1CertError, VerificationError
from .extraction import (
    extract_thm4a,
    extract_thm4b,
    validate_certificate,
    VectorFamily,
)
from .metric import distortion, identity_map, james_gap, kuratowski_embed
from .rational import format_rational, parse_rational
from .shattering import eta, sauer_shelah_extract
from .serialize import dumps_canonical, load_json_file


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


class _Tracker:
    """Remembers which files an invocation read, for envelope digests."""

    def __init__(self):
        self.paths: dict[str, Path] = {}

    def note(self, name: str, path: Path):
        self.paths[name] = path


def _resolve_space(arg: str, tracker: _Tracker, name: str = "space"):
    if arg.startswith("gen:"):
        parts = arg.split(":")
        kind = parts[1] if len(parts) > 1 else ""
        try:
            if kind == "m-ell1":
                return spaces.build_m_ell1(int(parts[2]))[0]
            if kind == "m-r":
                return spaces.build_m_r(int(parts[2]))
            if kind == "cube":
                return spaces.build_cube(int(parts[2]), parts[3])
            if kind == "rho":
                return spaces.rho_metric(parts[2], int(parts[3]))
        except (IndexError, ValueError):
            raise InputError(f"bad generator argument {arg!r}") from None
        raise InputError(f"unknown space generator {arg!r}")
    path = Path(arg)
    tracker.note(name, path)
    return serialize.space_from_json(load_json_file(path), where=arg)


def _resolve_map(arg: str, tracker: _Tracker, space=None):
    if arg.startswith("gen:"):
        parts = arg.split(":")
        kind = parts[1] if len(parts) > 1 else ""
        if kind == "kuratowski":
            if space is None:
                raise InputError("gen:kuratowski needs a --space to embed")
            base = parts[2] if len(parts) > 2 else "0"
            return kuratowski_embed(space, base)
        if kind == "phi":
            try:
                return spaces.phi_pointmap(int(parts[2]))
            except (IndexError, ValueError):
                raise InputError("gen:phi needs a truncation bound, e.g. gen:phi:6") from None
        raise InputError(f"unknown map generator {arg!r}")
    path = Path(arg)
    tracker.note("map", path)
    return serialize.pointmap_from_json(
        load_json_file(path), base_dir=path.parent, source_override=space
    )


def _emit(args, payload, tracker: _Tracker) -> int:
    if getattr(args, "envelope", False):
        payload = serialize.envelope(
            command=" ".join(sys.argv[1:]), input_paths=tracker.paths, payload=payload
        )
    text = dumps_canonical(payload)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_build(args, tracker):
    if args.what == "m-ell1":
        space, _ = spaces.build_m_ell1(args.n)
    elif args.what == "m-r":
        space = spaces.build_m_r(args.n)
    else:
        space = spaces.build_cube(args.n, args.p)
    return serialize.space_to_json(space)


def _cmd_metric(args, tracker):
    if args.what != "rho":
        raise InputError(f"unknown metric {args.what!r}")
    return serialize.space_to_json(spaces.rho_metric(args.kind, args.n))


def _cmd_embed(args, tracker):
    if args.what == "phi":
        return serialize.pointmap_to_json(spaces.phi_pointmap(args.n))
    if args.what == "g":
        space = (
            spaces.build_m_ell1(args.n)[0] if args.kind == "m-ell1" else spaces.build_m_r(args.n)
        )
        images = {}
        for p in space.points:
            vec = spaces.g_embed(p)
            images[p] = {k: format_rational(v) for k, v in vec.entries}
        return {"kind": "l1", "source": serialize.space_to_json(space), "images": images}
    space = _resolve_space(args.space, tracker)
    return serialize.pointmap_to_json(kuratowski_embed(space, args.base))


def _cmd_distortion(args, tracker):
    if args.map == "identity":
        if not (args.source and args.target):
            raise InputError("--map identity needs --source and --target")
        src = _resolve_space(args.source, tracker, "source")
        tgt = _resolve_space(args.target, tracker, "target")
        pm = identity_map(src, tgt)
    else:
        src = _resolve_space(args.source, tracker, "source") if args.source else None
        pm = _resolve_map(args.map, tracker, space=src)
    return serialize.report_to_json(distortion(pm))


def _cmd_james_gap(args, tracker):
    pm = _resolve_map(args.map, tracker)
    return {"n": args.n, "gap": format_rational(james_gap(pm, args.n))}


def _cmd_extract(args, tracker):
    space = _resolve_space(args.space, tracker) if args.space else None
    pm = _resolve_map(args.map, tracker, space=space)
    check = False if args.no_distortion_check else None
    if args.what == "thm4a":
        result = extract_thm4a(pm, args.d, check_distortion=check)
    else:
        if args.alpha is None:
            raise InputError("extract thm4b needs --alpha")
        result = extract_thm4b(
            pm,
            args.d,
            args.alpha,
            allow_proof_bound=args.allow_proof_bound,
            check_distortion=check,
        )
    return serialize.extraction_to_json(result, include_audit=args.audit)


def _cmd_shatter(args, tracker):
    path = Path(args.family)
    tracker.note("family", path)
    fam = serialize.family_from_json(load_json_file(path))
    h_mask = sauer_shelah_extract(fam, args.m)
    elements = (
        None if h_mask is None else [i + 1 for i in range(fam.k) if h_mask >> i & 1]
    )
    return {"k": fam.k, "m": args.m, "H": elements}


def _cmd_eta(args, tracker):
    value = eta(args.alpha)
    return {
        "alpha": format_rational(args.alpha),
        "eta": format_rational(value),
        "approx": f"{float(value):.6f}",
    }


def _cmd_calc(args, tracker):
    if args.what == "min-k":
        statement, proof = calculators.min_k(args.d, args.alpha)
        return {"statement": statement, "proof": proof}
    if args.what == "james":
        return {"constant": format_rational(calculators.james_halving(args.b, args.w))}
    w, size = calculators.cube_exponent(args.d, args.eps, ratio=args.ratio)
    return {"w": w, "size": size}


def _cmd_stability(args, tracker):
    fam = stability.preset(args.preset)
    lims = stability.iterated_limits(fam, args.horizon)
    return {
        "lim_nm": format_rational(lims.lim_n_lim_m),
        "lim_mn": format_rational(lims.lim_m_lim_n),
        "ratio": format_rational(lims.ratio),
    }


def _cmd_verify(args, tracker):
    path = Path(args.certificate)
    tracker.note("certificate", path)
    obj = load_json_file(path)
    if isinstance(obj, dict) and "payload" in obj:
        obj = obj["payload"]  # envelope: re-check its payload
    cert = serialize.certificate_from_json(obj)
    space = _resolve_space(args.space, tracker) if args.space else None
    pm = _resolve_map(args.map, tracker, space=space)
    rows = [pm.source.index(lab) for lab in cert.member_labels]
    fam = VectorFamily(
        cert.member_labels,
        pm.coord_labels,
        pm.image_num[rows].astype("int64"),
        pm.image_den,
    )
    validate_certificate(cert, fam)
    return {"status": "verified", "ratio": format_rational(cert.ratio)}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON payload to this file")
    common.add_argument("--envelope", action="store_true", help="wrap output in an envelope")
    common.add_argument("--threads", type=int, default=None, help="numba thread count")

    parser = argparse.ArgumentParser(prog="l1cert", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="generate a space")
    p.add_argument("what", choices=["m-ell1", "m-r", "cube"])
    p.add_argument("--n", "--N", dest="n", type=int, required=True)
    p.add_argument("--p", default="1", help="cube norm: 1, 2 or inf")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("metric", parents=[common], help="companion metrics")
    p.add_argument("what", choices=["rho"])
    p.add_argument("--kind", choices=["m-ell1", "m-r"], required=True)
    p.add_argument("--n", "--N", dest="n", type=int, required=True)
    p.set_defaults(func=_cmd_metric)

    p = sub.add_parser("embed", parents=[common], help="emit an embedding")
    p.add_argument("what", choices=["phi", "g", "kuratowski"])
    p.add_argument("--n", "--N", dest="n", type=int)
    p.add_argument("--kind", choices=["m-ell1", "m-r"], default="m-r")
    p.add_argument("--space", help="space file or generator (kuratowski)")
    p.add_argument("--base", default="0")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("distortion", parents=[common], help="exact distortion report")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--map", required=True, help="'identity', a map file, or gen:kuratowski")
    p.set_defaults(func=_cmd_distortion)

    p = sub.add_parser("james-gap", parents=[common], help="initial/tail gap of a segment map")
    p.add_argument("--map", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_james_gap)

    p = sub.add_parser("extract", parents=[common], help="run an extraction pipeline")
    p.add_argument("what", choices=["thm4a", "thm4b"])
    p.add_argument("--space")
    p.add_argument("--map", required=True)
    p.add_argument("--D", dest="d", type=_rational, required=True)
    p.add_argument("--alpha", type=_rational)
    p.add_argument("--allow-proof-bound", action="store_true")
    p.add_argument("--no-distortion-check", action="store_true")
    p.add_argument("--audit", action="store_true", help="include the audit trail")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("shatter", parents=[common], help="extract a shattered set")
    p.add_argument("--family", required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=_cmd_shatter)

    p = sub.add_parser("eta", parents=[common], help="shattering density exponent")
    p.add_argument("--alpha", type=_rational, required=True)
    p.set_defaults(func=_cmd_eta)

    p = sub.add_parser("calc", parents=[common], help="size and constant calculators")
    p.add_argument("what", choices=["min-k", "james", "cube-size"])
    p.add_argument("--D", dest="d", type=_rational)
    p.add_argument("--alpha", type=_rational)
    p.add_argument("--b", type=_rational)
    p.add_argument("--w", type=int)
    p.add_argument("--eps", type=_rational)
    p.add_argument("--ratio", type=_rational, default=None)
    p.set_defaults(func=_cmd_calc)

    p = sub.add_parser("stability", parents=[common], help="iterated double limits")
    p.add_argument("--preset", choices=list(stability.PRESETS), required=True)
    p.add_argument("--horizon", type=int, default=32)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate")
    p.add_argument("--certificate", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--space")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None):
        if active_backend() == "numba":
            import numba

            numba.set_num_threads(args.threads)
    tracker = _Tracker()
    try:
        payload = args.func(args, tracker)
        return _emit(args, payload, tracker)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except L1CertError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
