"""End-to-end pipeline: domain -> pieces -> monomials -> map -> certificate.

Stage seeds are derived deterministically from the run seed, and tuning
samples are never reused for verification (each stage adds a distinct
offset).  Reports are reproducible byte for byte given identical configs,
except for the wall-clock timing block.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import serialize
from .domains import ReinhardtDomain, validate
from .errors import CertificateError, DomainValidationError
from .green import ClosedFormCheck, check_closed_form, eval_green
from .hommap import HomogeneousMap, eval_components
from .pieces import (
    MonomialSystem,
    RationalPL,
    SelectionBudget,
    emit_monomials,
    eval_v,
    exact_pieces_polyhedral,
    rationalize,
    select_support_pieces,
)
from .verify import (
    FindS0Result,
    SandwichCertificate,
    build_sandwich,
    find_s0,
    sample_level_set,
)

# Stage offsets applied to the run seed; tuning and verification never share.
SEED_SELECT = 11
SEED_FIND_S0 = 23
SEED_SANDWICH = 37
SEED_ACTIVE = 47
SEED_CSV = 59


@dataclass
class RunConfig:
    epsilon: float
    seed: int
    t: Fraction = Fraction(-1)
    denom_bound: int = 100_000
    grid: int = 8
    s_cap: int = 256
    sample_count: int = 500
    boundary_count: int = 2000
    zero_count: int = 2000
    csv_rows: int = 200
    delta_safety: float = 0.9
    out_dir: Optional[Path] = None


@dataclass
class ApproximationReport:
    domain: dict
    epsilon: float
    delta: float
    t: str
    pieces_source: str
    selection: Optional[dict]
    m: int
    q: int
    N: int
    r: str
    perturbation_norm: float
    s: int
    error_table: list[dict]
    active_histogram: dict
    certificate: dict
    green_check: Optional[dict]
    seeds: dict
    timings: dict


@dataclass
class PipelineResult:
    domain: ReinhardtDomain
    pl: RationalPL
    system: MonomialSystem
    map: HomogeneousMap
    find_s0: FindS0Result
    certificate: SandwichCertificate
    report: ApproximationReport


def _error_table(result: FindS0Result, base_seed: int, count: int) -> list[dict]:
    rows = []
    for i, (s, stat) in enumerate(result.table):
        rows.append(
            {
                "s": s,
                "sup": stat.sup_error,
                "mean": stat.mean_error,
                "count": stat.count,
                "seed": base_seed + 101 * i,
                "argmax": [[c.real, c.imag] for c in stat.argmax_point],
            }
        )
    return rows


def approximate(domain: ReinhardtDomain, config: RunConfig) -> PipelineResult:
    """Run the full construction and certify the sandwich for config.epsilon."""
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    report_validate = validate(domain)
    if not report_validate.ok:
        raise DomainValidationError(report_validate)
    timings["validate"] = time.perf_counter() - t0

    delta = 0.5 * math.log1p(config.epsilon)
    stage_eps = config.delta_safety * delta

    t0 = time.perf_counter()
    green_check = None
    if domain.kind == "polyhedral":
        green_check = check_closed_form(domain, count=1000, resolution=64, seed=config.seed)
        source = "exact"
        pieces = exact_pieces_polyhedral(domain)
        selection = None
    else:
        source = "grid"
        sel = select_support_pieces(
            domain,
            stage_eps,
            t=float(config.t),
            budget=SelectionBudget(sample_count=2000, seed=config.seed + SEED_SELECT),
            initial_resolution=config.grid,
        )
        pieces = sel.pieces
        selection = {
            "resolution": sel.resolution,
            "measured_sup": sel.measured_sup,
            "sample_count": sel.sample_count,
            "seed": sel.seed,
        }
    timings["pieces"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    pl = rationalize(pieces, t=config.t, denom_bound=config.denom_bound, seed=config.seed)
    system = emit_monomials(pl)
    timings["rationalize"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    s_result = find_s0(
        system,
        domain,
        stage_eps,
        t=float(config.t),
        s_cap=config.s_cap,
        sample_count=config.sample_count,
        seed=config.seed + SEED_FIND_S0,
    )
    timings["find_s0"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    certificate = build_sandwich(
        s_result.map,
        domain,
        config.epsilon,
        boundary_count=config.boundary_count,
        zero_count=config.zero_count,
        seed=config.seed + SEED_SANDWICH,
    )
    timings["sandwich"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    v = lambda z: eval_v(system, z).value
    active_samples = sample_level_set(
        v, system.n, float(config.t), 1000, config.seed + SEED_ACTIVE
    )
    histogram: dict[str, int] = {}
    for z in active_samples.points:
        n_active = len(eval_v(system, z).active)
        histogram[str(n_active)] = histogram.get(str(n_active), 0) + 1
    timings["active_histogram"] = time.perf_counter() - t0

    report = ApproximationReport(
        domain=serialize.domain_to_dict(domain),
        epsilon=config.epsilon,
        delta=delta,
        t=serialize.rational_str(config.t),
        pieces_source=source,
        selection=selection,
        m=system.m,
        q=system.q,
        N=system.N,
        r=serialize.rational_str(system.r),
        perturbation_norm=pl.perturbation_norm,
        s=s_result.s,
        error_table=_error_table(s_result, config.seed + SEED_FIND_S0, config.sample_count),
        active_histogram=histogram,
        certificate=serialize.certificate_to_dict(certificate),
        green_check=_green_check_dict(green_check),
        seeds={
            "run": config.seed,
            "select": config.seed + SEED_SELECT,
            "find_s0": config.seed + SEED_FIND_S0,
            "sandwich": config.seed + SEED_SANDWICH,
            "active": config.seed + SEED_ACTIVE,
        },
        timings=timings,
    )
    result = PipelineResult(domain, pl, system, s_result.map, s_result, certificate, report)
    if config.out_dir is not None:
        write_artifacts(result, config)
    if not certificate.passed:
        raise CertificateError(certificate)
    return result


def _green_check_dict(check: Optional[ClosedFormCheck]) -> Optional[dict]:
    if check is None:
        return None
    return {
        "ok": check.ok,
        "max_gap": check.max_gap,
        "tolerance": check.tolerance,
        "oracle_excess": check.oracle_excess,
        "count": check.count,
        "resolution": check.resolution,
        "seed": check.seed,
    }


def report_to_dict(report: ApproximationReport) -> dict:
    return {
        "domain": report.domain,
        "epsilon": report.epsilon,
        "delta": report.delta,
        "t": report.t,
        "pieces_source": report.pieces_source,
        "selection": report.selection,
        "m": report.m,
        "q": report.q,
        "N": report.N,
        "r": report.r,
        "perturbation_norm": report.perturbation_norm,
        "s": report.s,
        "error_table": report.error_table,
        "active_histogram": report.active_histogram,
        "certificate": report.certificate,
        "green_check": report.green_check,
        "seeds": report.seeds,
        "timings": report.timings,
    }


def write_artifacts(result: PipelineResult, config: RunConfig) -> None:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    serialize.dump_json(serialize.domain_to_dict(result.domain), out / "domain.json")
    serialize.dump_json(serialize.pl_to_dict(result.pl), out / "pl.json")
    serialize.dump_json(serialize.system_to_dict(result.system), out / "system.json")
    serialize.dump_json(serialize.map_to_dict(result.map), out / "map.json")
    serialize.dump_json(serialize.certificate_to_dict(result.certificate), out / "certificate.json")
    serialize.dump_json(report_to_dict(result.report), out / "report.json")
    _write_sample_csv(result, config, out / "samples.csv")


def _write_sample_csv(result: PipelineResult, config: RunConfig, path: Path) -> None:
    from .verify import boundary_sample

    rows = []
    count = config.csv_rows
    v = lambda z: eval_v(result.system, z).value
    level = sample_level_set(v, result.system.n, float(config.t), count, config.seed + SEED_CSV)
    sets = [
        ("level_set", level.points),
        ("boundary", boundary_sample(result.domain, count, config.seed + SEED_CSV + 1).points),
        (
            "dilated_boundary",
            boundary_sample(
                result.domain, count, config.seed + SEED_CSV + 2, dilation=1.0 + config.epsilon
            ).points,
        ),
    ]
    q_s = result.map.q_s
    for name, pts in sets:
        for z in pts:
            comps = eval_components(result.map, z)
            rows.append(
                {
                    "set": name,
                    "point": [complex(c) for c in z],
                    "v": eval_v(result.system, z).value,
                    "G": eval_green(result.domain, z).value,
                    "v_s": max(c.log_modulus for c in comps) / q_s,
                    "components": [c.log_modulus / q_s for c in comps],
                }
            )
    serialize.write_samples_csv(path, rows, result.system.n, result.system.n)
