"""Command-line front door: load classes, run analyses, emit artifacts.

Exit codes: 0 success, 1 usage or input-format error, 2 verification failure,
3 budget or cap exceeded.  All diagnostics go to stderr; outputs are
deterministic and independent of the worker count (analyses are pure and run
sequentially regardless of --workers).
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path
from typing import Optional

from spheredim.concepts import (
    CapExceededError,
    ClassFormatError,
    ConceptClass,
    DimensionVariant,
    bits,
    dimension,
    dual_class,
    family_class,
    format_class,
    max_shattered_set,
    parse_class,
    power_class,
    product_class,
)
from spheredim.complexes import (
    antipodal_subcomplex,
    barycentric_subdivision,
    complex_to_payload,
    face_counts,
    realizable_complex,
)
from spheredim.extremal import (
    Singleton,
    ThresholdLike,
    Vc1NonThreshold,
    Vc2Plus,
    classify_low_vc,
    collapse_certificate,
    cubical_barycentric,
    cubical_complex,
    full_subcomplex_embedding_check,
    is_extremal,
)
from spheredim.spheres import (
    WitnessError,
    barycentric_witness,
    crosspolytope_witness,
    sd_bounds,
    verify_witness,
)
from spheredim.storage import StorageError, canonical_json, envelope, witness_payload


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def _load_class(path: str, args) -> ConceptClass:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    cls = parse_class(text)
    if cls.domain_size > args.max_domain:
        raise CapExceededError(
            f"domain size {cls.domain_size} exceeds --max-domain {args.max_domain}"
        )
    if len(cls) > args.max_hypotheses:
        raise CapExceededError(
            f"{len(cls)} hypotheses exceed --max-hypotheses {args.max_hypotheses}"
        )
    return cls


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _class_hash(cls: ConceptClass) -> str:
    return hashlib.sha256(format_class(cls).encode()).hexdigest()[:12]


def _flip_string(mask: int, n: int) -> str:
    return "".join("-" if mask & (1 << x) else "+" for x in range(n))


def _classification_payload(cls: ConceptClass) -> dict:
    got = classify_low_vc(cls)
    if isinstance(got, Singleton):
        return {"bucket": "singleton"}
    if isinstance(got, ThresholdLike):
        return {
            "bucket": "threshold_like",
            "flip": _flip_string(got.flip_mask, cls.domain_size),
            "order": list(got.order),
        }
    if isinstance(got, Vc1NonThreshold):
        w = got.witness
        return {
            "bucket": "vc1_non_threshold",
            "hexagon": [
                w.target.complex.vertices[v] for v in w.vertex_map
            ],
        }
    assert isinstance(got, Vc2Plus)
    return {"bucket": "vc2_plus", "shattered_pair": list(got.shattered_pair)}


def _dims_payload(cls: ConceptClass) -> dict:
    return {
        "vc": dimension(cls, DimensionVariant.PRIMAL),
        "vc_dual": dimension(cls, DimensionVariant.DUAL),
        "vc_antipodal": dimension(cls, DimensionVariant.PRIMAL_ANTIPODAL),
        "vc_dual_antipodal": dimension(cls, DimensionVariant.DUAL_ANTIPODAL),
    }


def _sd_payload(cls: ConceptClass) -> dict:
    sb = sd_bounds(cls)
    lower_names, upper_names = sb.certificate_names()
    return {
        "lower": sb.lower,
        "upper": sb.upper,
        "lower_certificates": [
            {"name": c.name, "value": c.value} for c in sb.lower_certificates
        ],
        "upper_certificates": [
            {"name": c.name, "value": c.value} for c in sb.upper_certificates
        ],
    }


def cmd_dims(args) -> int:
    cls = _load_class(args.file, args)
    table = _dims_payload(cls)
    keys = {
        "vc": ("vc",),
        "dual": ("vc_dual",),
        "antipodal": ("vc_antipodal",),
        "dual-antipodal": ("vc_dual_antipodal",),
        "all": ("vc", "vc_dual", "vc_antipodal", "vc_dual_antipodal"),
    }[args.variant]
    if args.json:
        payload = {k: table[k] for k in keys}
        _emit(canonical_json(envelope("report", payload)), args.output)
    else:
        names = {
            "vc": "VC",
            "vc_dual": "VC*",
            "vc_antipodal": "VC^a",
            "vc_dual_antipodal": "VC*a",
        }
        lines = [f"{names[k]:6} {table[k]}" for k in keys]
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_complex(args) -> int:
    cls = _load_class(args.file, args)
    value = realizable_complex(cls)
    if args.antipodal:
        value = antipodal_subcomplex(value)
    for _ in range(args.barycentric):
        value = barycentric_subdivision(value)
    _emit(canonical_json(envelope("complex", complex_to_payload(value))), args.output)
    return 0


def cmd_witness(args) -> int:
    cls = _load_class(args.file, args)
    candidates = []
    smask = max_shattered_set(cls)
    spoints = tuple(bits(smask))
    if spoints:
        candidates.append(("crosspolytope", len(spoints) - 1))
    dual, _ = dual_class(cls)
    hmask = max_shattered_set(dual, antipodal=True)
    hyps = tuple(bits(hmask))
    if len(hyps) >= 2:
        candidates.append(("barycentric", len(hyps) - 2))
    if args.method != "auto":
        candidates = [c for c in candidates if c[0] == args.method]
    if not candidates:
        raise VerificationFailure("no witness construction applies to this class")
    method = max(candidates, key=lambda c: (c[1], c[0] == "crosspolytope"))[0]
    if method == "crosspolytope":
        witness = crosspolytope_witness(cls, spoints)
    else:
        witness = barycentric_witness(cls, hyps)
    report = verify_witness(witness)
    if not report:
        raise VerificationFailure(f"witness failed verification: {report.detail}")
    _emit(canonical_json(envelope("witness", witness_payload(witness))), args.output)
    return 0


def cmd_sd(args) -> int:
    cls = _load_class(args.file, args)
    payload = _sd_payload(cls)
    if args.json:
        _emit(canonical_json(envelope("report", payload)), args.output)
    else:
        lower_names = ", ".join(c["name"] for c in payload["lower_certificates"])
        upper_names = ", ".join(c["name"] for c in payload["upper_certificates"])
        lines = [
            f"sd interval [{payload['lower']}, {payload['upper']}]",
            f"lower certificates: {lower_names}",
            f"upper certificates: {upper_names}",
        ]
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_extremal(args) -> int:
    cls = _load_class(args.file, args)
    report = is_extremal(cls)
    payload: dict = {
        "size": report.size,
        "shattered_sets": report.shattered_count,
        "extremal": report.extremal,
    }
    if report.extremal:
        cc = cubical_complex(cls)
        payload["cube_counts"] = list(cc.counts())
        payload["barycentric_face_counts"] = list(face_counts(cubical_barycentric(cc)))
        moves = collapse_certificate(cc, node_budget=args.collapse_budget)
        payload["collapse"] = (
            {"collapsible": True, "steps": len(moves)}
            if moves is not None
            else {"collapsible": False}
        )
        embed = full_subcomplex_embedding_check(cls)
        payload["embedding"] = {
            "ok": embed.ok,
            "reversed_case": embed.reversed_case,
            "detail": embed.detail,
        }
    if args.json:
        _emit(canonical_json(envelope("report", payload)), args.output)
    else:
        lines = [
            f"hypotheses {payload['size']}",
            f"shattered sets {payload['shattered_sets']}",
            f"extremal {str(payload['extremal']).lower()}",
        ]
        if report.extremal:
            lines.append(f"cube counts {tuple(payload['cube_counts'])}")
            lines.append(
                f"barycentric face counts {tuple(payload['barycentric_face_counts'])}"
            )
            lines.append(
                "collapsible "
                + (
                    f"yes in {payload['collapse']['steps']} steps"
                    if payload["collapse"]["collapsible"]
                    else "no"
                )
            )
            lines.append(f"embedding {payload['embedding']['detail']}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_classify(args) -> int:
    cls = _load_class(args.file, args)
    payload = _classification_payload(cls)
    if args.json:
        _emit(canonical_json(envelope("report", payload)), args.output)
    else:
        lines = [f"bucket {payload['bucket']}"]
        for key in ("flip", "order", "hexagon", "shattered_pair"):
            if key in payload:
                lines.append(f"{key} {payload[key]}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_family(args) -> int:
    cls = family_class(args.name, args.n)
    if args.power > 1:
        cls = power_class(cls, args.power)
    _emit(format_class(cls), args.output)
    return 0


def cmd_product(args) -> int:
    a = _load_class(args.a, args)
    b = _load_class(args.b, args)
    _emit(format_class(product_class(a, b)), args.output)
    return 0


def cmd_report(args) -> int:
    cls = _load_class(args.file, args)
    dims = _dims_payload(cls)
    sd = _sd_payload(cls)
    try:
        rep = is_extremal(cls)
        ext: Optional[dict] = {
            "size": rep.size,
            "shattered_sets": rep.shattered_count,
            "extremal": rep.extremal,
        }
    except CapExceededError:
        ext = None
    classification = _classification_payload(cls)
    lr_floor = (sd["lower"] + 3 + 1) // 2 if sd["lower"] >= 1 else None
    payload = {
        "class": {"hash": _class_hash(cls), "points": cls.domain_size, "hypotheses": len(cls)},
        "dimensions": dims,
        "sd": sd,
        "extremal": ext,
        "classification": classification,
        "lr_floor": lr_floor,
    }
    if args.json:
        _emit(canonical_json(envelope("report", payload)), args.output)
        return 0
    lines = [
        f"class {payload['class']['hash']} on {cls.domain_size} points, {len(cls)} hypotheses",
        f"VC {dims['vc']}  VC* {dims['vc_dual']}  VC^a {dims['vc_antipodal']}  VC*a {dims['vc_dual_antipodal']}",
    ]
    if sd["lower"] == sd["upper"]:
        lines.append(f"sd [{sd['lower']}, {sd['upper']}] (exact)")
    else:
        lines.append(f"sd [{sd['lower']}, {sd['upper']}]")
    lines.append(
        "sd certificates: lower "
        + ", ".join(c["name"] for c in sd["lower_certificates"])
        + "; upper "
        + ", ".join(c["name"] for c in sd["upper_certificates"])
    )
    if ext is not None:
        lines.append(f"extremal {str(ext['extremal']).lower()} ({ext['size']} vs {ext['shattered_sets']})")
    lines.append(f"classification {classification['bucket']}")
    if lr_floor is not None:
        lines.append(f"list-replicability floor {lr_floor}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="spheredim", description=__doc__)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--max-domain", type=int, default=1 << 20)
    parser.add_argument("--max-hypotheses", type=int, default=1 << 20)
    parser.add_argument("--collapse-budget", type=int, default=200_000)
    parser.add_argument(
        "--workers", type=int, default=1,
        help="accepted for compatibility; results never depend on it",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="VC-type dimension table")
    p.add_argument("file")
    p.add_argument(
        "--variant",
        choices=("vc", "dual", "antipodal", "dual-antipodal", "all"),
        default="all",
    )
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("complex", help="export the realizable complex")
    p.add_argument("file")
    p.add_argument("--antipodal", action="store_true")
    p.add_argument("--barycentric", type=int, default=0, metavar="K")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("witness", help="construct and verify a sphere witness")
    p.add_argument("file")
    p.add_argument(
        "--method", choices=("auto", "crosspolytope", "barycentric"), default="auto"
    )
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("sd", help="spherical-dimension interval with certificates")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sd)

    p = sub.add_parser("extremal", help="Pajor counts and cubical analysis")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("classify", help="low-VC classification with certificate")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("family", help="emit a named class family")
    p.add_argument("name", choices=("cube", "universal", "universal_plus", "threshold", "subsets_leq"))
    p.add_argument("n", type=int)
    p.add_argument("-m", "--power", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("product", help="product of two class files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("report", help="full analysis report")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ClassFormatError, StorageError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except (VerificationFailure, WitnessError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
