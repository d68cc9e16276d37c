"""JSON and CSV serialization.

Rationals travel as "p/q" strings (plain "p" when the denominator is 1);
floats rely on repr round-tripping, so serialize -> parse -> serialize is
byte-identical.  All JSON is written with sorted keys and a trailing
newline for reproducible files.
"""

from __future__ import annotations

import csv
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Union

from .domains import MonomialConstraint, ReinhardtDomain, polyhedral_domain, weighted_ball
from .errors import InputError
from .hommap import HomogeneousMap, build_map
from .pieces import Monomial, MonomialSystem, RationalPL, RationalPiece
from .verify import SandwichCertificate

__all__ = [
    "rational_str",
    "parse_rational",
    "domain_to_dict",
    "domain_from_dict",
    "pl_to_dict",
    "pl_from_dict",
    "system_to_dict",
    "system_from_dict",
    "map_to_dict",
    "map_from_dict",
    "certificate_to_dict",
    "certificate_from_dict",
    "dump_json",
    "load_json",
    "write_samples_csv",
]


def rational_str(f: Fraction) -> str:
    return str(f)


def parse_rational(s: Union[str, int]) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational literal {s!r}") from exc


def domain_to_dict(domain: ReinhardtDomain) -> dict:
    out = {"dim": domain.dim, "kind": domain.kind}
    if domain.kind == "polyhedral":
        cons = []
        for c in domain.constraints:
            entry = {"alpha": [rational_str(a) for a in c.alpha]}
            if c.log_bound is not None:
                entry["bound"] = {"log_bound": rational_str(c.log_bound)}
            else:
                entry["bound"] = c.bound
            cons.append(entry)
        out["constraints"] = cons
    else:
        out["p"] = domain.p
        out["weights"] = list(domain.weights)
    return out


def domain_from_dict(data: dict) -> ReinhardtDomain:
    try:
        kind = data["kind"]
        if kind == "polyhedral":
            cons = []
            for entry in data["constraints"]:
                alpha = tuple(parse_rational(a) for a in entry["alpha"])
                bound = entry["bound"]
                if isinstance(bound, dict):
                    log_bound = parse_rational(bound["log_bound"])
                    cons.append(
                        MonomialConstraint(alpha, math.exp(float(log_bound)), log_bound)
                    )
                else:
                    cons.append(MonomialConstraint(alpha, float(bound)))
            dom = polyhedral_domain(cons)
        elif kind == "weighted_ball":
            dom = weighted_ball(float(data["p"]), [float(w) for w in data["weights"]])
        else:
            raise InputError(f"unknown domain kind {kind!r}")
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed domain specification: {exc}") from exc
    if "dim" in data and int(data["dim"]) != dom.dim:
        raise InputError("declared dim does not match the domain data")
    return dom


def pl_to_dict(pl: RationalPL) -> dict:
    return {
        "pieces": [
            {"a": [rational_str(a) for a in piece.a], "b": rational_str(piece.b)}
            for piece in pl.pieces
        ],
        "r": rational_str(pl.r),
        "t": rational_str(pl.t),
        "gp_certified": pl.gp_certified,
        "perturbation_norm": pl.perturbation_norm,
    }


def pl_from_dict(data: dict) -> RationalPL:
    pieces = tuple(
        RationalPiece(
            tuple(parse_rational(a) for a in entry["a"]), parse_rational(entry["b"])
        )
        for entry in data["pieces"]
    )
    return RationalPL(
        pieces,
        parse_rational(data["r"]),
        parse_rational(data["t"]),
        bool(data["gp_certified"]),
        float(data["perturbation_norm"]),
    )


def system_to_dict(system: MonomialSystem) -> dict:
    return {
        "monomials": [
            {"k": list(mono.k_vec), "log_coef": rational_str(mono.log_coef)}
            for mono in system.monomials
        ],
        "N": system.N,
        "r": rational_str(system.r),
        "q": system.q,
        "n": system.n,
    }


def system_from_dict(data: dict) -> MonomialSystem:
    monomials = tuple(
        Monomial(tuple(int(k) for k in entry["k"]), parse_rational(entry["log_coef"]))
        for entry in data["monomials"]
    )
    return MonomialSystem(
        monomials, N=int(data["N"]), r=parse_rational(data["r"]), q=int(data["q"]), n=int(data["n"])
    )


def map_to_dict(map_: HomogeneousMap) -> dict:
    return {"system": system_to_dict(map_.system), "s": map_.s}


def map_from_dict(data: dict) -> HomogeneousMap:
    return build_map(system_from_dict(data["system"]), int(data["s"]))


def certificate_to_dict(cert: SandwichCertificate) -> dict:
    out = {
        "epsilon": cert.epsilon,
        "delta": cert.delta,
        "s": cert.s,
        "q_s": cert.q_s,
        "scale_log": cert.scale_log,
        "inner_margin": cert.inner_margin,
        "outer_margin": cert.outer_margin,
        "zero_locus_margin": cert.zero_locus_margin,
        "boundary_count": cert.boundary_count,
        "zero_count": cert.zero_count,
        "seed": cert.seed,
        "passed": cert.passed,
        "counterexample": None,
    }
    if cert.counterexample is not None:
        out["counterexample"] = [[c.real, c.imag] for c in cert.counterexample]
    return out


def certificate_from_dict(data: dict) -> SandwichCertificate:
    counterexample = None
    if data.get("counterexample") is not None:
        counterexample = tuple(complex(re, im) for re, im in data["counterexample"])
    return SandwichCertificate(
        epsilon=float(data["epsilon"]),
        delta=float(data["delta"]),
        s=int(data["s"]),
        q_s=int(data["q_s"]),
        scale_log=float(data["scale_log"]),
        inner_margin=float(data["inner_margin"]),
        outer_margin=float(data["outer_margin"]),
        zero_locus_margin=float(data["zero_locus_margin"]),
        boundary_count=int(data["boundary_count"]),
        zero_count=int(data["zero_count"]),
        seed=int(data["seed"]),
        passed=bool(data["passed"]),
        counterexample=counterexample,
    )


def dump_json(data: dict, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def load_json(path: Union[str, Path]) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def write_samples_csv(path: Union[str, Path], rows: list[dict], n: int, n_components: int) -> None:
    """Sample dump for external plotting; -inf appears as the literal '-inf'."""
    header = ["set"]
    for k in range(n):
        header += [f"re{k + 1}", f"im{k + 1}"]
    header += ["v", "G", "v_s"]
    header += [f"comp{k + 1}" for k in range(n_components)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            out = [row["set"]]
            for c in row["point"]:
                out += [repr(c.real), repr(c.imag)]
            out += [str(row["v"]), str(row["G"]), str(row["v_s"])]
            out += [str(v) for v in row["components"]]
            writer.writerow(out)
