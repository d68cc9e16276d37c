"""Command line interface.

Subcommands:
  validate     check a domain file, print the validation report
  eval         evaluate G (and v, v_s, components when a map is given) at points
  approximate  run the full pipeline and write report artifacts
  verify       re-check a stored certificate with fresh samples

Exit codes: 0 success / certificate passes; 2 bad input; 3 domain validation
failed; 4 piece-selection budget exhausted; 5 general position failure;
6 s cap reached; 7 certificate failed; 8 certificate refuted; 9 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import serialize
from .domains import NEG_INF, validate as validate_domain
from .errors import GreenlemError, InputError, RefutationError
from .green import eval_green
from .hommap import eval_components
from .pieces import eval_v
from .pipeline import RunConfig, approximate
from .verify import verify_certificate

IO_EXIT = 9


def _load_domain(path: str):
    return serialize.domain_from_dict(serialize.load_json(path))


def _parse_point(text: str, lineno: int) -> tuple[complex, ...]:
    parts = [p.strip() for p in text.split(",")]
    out = []
    for p in parts:
        try:
            out.append(complex(p.replace(" ", "")))
        except ValueError as exc:
            raise InputError(f"malformed coordinate {p!r} in point #{lineno}") from exc
    return tuple(out)


def _fmt(v: float) -> str:
    return str(v)  # repr-style; -inf prints as the literal "-inf"


def cmd_validate(args) -> int:
    domain = _load_domain(args.domain)
    report = validate_domain(domain)
    payload = {
        "ok": report.ok,
        "failures": [
            {"code": f.code, "message": f.message, "witness": f.witness}
            for f in report.failures
        ],
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0 if report.ok else 3


def cmd_eval(args) -> int:
    domain = _load_domain(args.domain)
    report = validate_domain(domain)
    if not report.ok:
        print(json.dumps({"error": "validation", "failures": [f.message for f in report.failures]}), file=sys.stderr)
        return 3
    map_ = None
    system = None
    if args.map:
        map_ = serialize.map_from_dict(serialize.load_json(args.map))
        system = map_.system
    texts = []
    if args.points:
        texts += [t for t in args.points.split(";") if t.strip()]
    if args.points_file:
        texts += [t for t in Path(args.points_file).read_text().splitlines() if t.strip()]
    if not texts:
        raise InputError("no points given; use --points or --points-file")
    header = ["point", "G"]
    if map_ is not None:
        header += ["v", "v_s"] + [f"comp{k + 1}" for k in range(map_.n)]
    print("\t".join(header))
    for i, text in enumerate(texts, start=1):
        z = _parse_point(text, i)
        if len(z) != domain.dim:
            raise InputError(f"point #{i} has {len(z)} coordinates, expected {domain.dim}")
        cells = [text.strip(), _fmt(eval_green(domain, z).value)]
        if map_ is not None:
            cells.append(_fmt(eval_v(system, z).value))
            comps = eval_components(map_, z)
            vs = max(c.log_modulus for c in comps) / map_.q_s if any(
                c.log_modulus > NEG_INF for c in comps
            ) else NEG_INF
            cells.append(_fmt(vs))
            cells += [_fmt(c.log_modulus / map_.q_s) for c in comps]
        print("\t".join(cells))
    return 0


def cmd_approximate(args) -> int:
    domain = _load_domain(args.domain)
    config = RunConfig(
        epsilon=args.epsilon,
        seed=args.seed,
        t=Fraction(args.t),
        denom_bound=args.denom_bound,
        grid=args.grid,
        s_cap=args.s_cap,
        sample_count=args.samples,
        boundary_count=args.boundary_samples,
        zero_count=args.boundary_samples,
        out_dir=Path(args.out) if args.out else None,
    )
    result = approximate(domain, config)
    cert = result.certificate
    print(
        f"certificate: passed  s={cert.s}  q_s={cert.q_s}  "
        f"inner={cert.inner_margin:.6g}  outer={cert.outer_margin:.6g}  "
        f"zero_margin={cert.zero_locus_margin:.6g}"
    )
    if args.out:
        print(f"artifacts written to {args.out}")
    return 0


def cmd_verify(args) -> int:
    cert = serialize.certificate_from_dict(serialize.load_json(args.certificate))
    map_ = serialize.map_from_dict(serialize.load_json(args.map))
    domain = _load_domain(args.domain)
    seed = args.seed if args.seed is not None else cert.seed + 5000
    outcome = verify_certificate(cert, map_, domain, seed)
    if outcome.ok:
        print(f"certificate confirmed ({outcome.reason})")
        return 0
    payload = {"refuted": outcome.reason}
    if outcome.fresh is not None and outcome.fresh.counterexample is not None:
        payload["counterexample"] = [
            [c.real, c.imag] for c in outcome.fresh.counterexample
        ]
    print(json.dumps(payload, indent=2, sort_keys=True), file=sys.stderr)
    raise RefutationError(outcome.reason)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenlem",
        description="Green functions of Reinhardt domains and lemniscate sandwich certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a domain file")
    p.add_argument("--domain", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="evaluate G / v / v_s at points")
    p.add_argument("--domain", required=True)
    p.add_argument("--map", help="map JSON from a previous run (enables v, v_s, components)")
    p.add_argument("--points", help="semicolon-separated points, e.g. '0.5,0.5;1+2j,0.3'")
    p.add_argument("--points-file", help="file with one point per line")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("approximate", help="run the full pipeline")
    p.add_argument("--domain", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--t", default="-1", help="certification level (rational, default -1)")
    p.add_argument("--grid", type=int, default=8, help="initial simplex grid resolution")
    p.add_argument("--denom-bound", type=int, default=100_000)
    p.add_argument("--s-cap", type=int, default=256)
    p.add_argument("--samples", type=int, default=500, help="level-set sample count")
    p.add_argument("--boundary-samples", type=int, default=2000)
    p.add_argument("--out", help="output directory for report artifacts")
    p.set_defaults(func=cmd_approximate)

    p = sub.add_parser("verify", help="re-verify a stored certificate")
    p.add_argument("--certificate", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--domain", required=True)
    p.add_argument("--seed", type=int, help="fresh seed (default: stored seed + 5000)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GreenlemError as exc:
        block = {"error": type(exc).__name__, "exit_code": exc.exit_code, "detail": str(exc)}
        print(json.dumps(block, indent=2, sort_keys=True), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        block = {"error": "OSError", "exit_code": IO_EXIT, "detail": str(exc)}
        print(json.dumps(block, indent=2, sort_keys=True), file=sys.stderr)
        return IO_EXIT


if __name__ == "__main__":
    sys.exit(main())
