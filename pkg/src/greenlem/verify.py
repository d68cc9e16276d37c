"""Sampling-based convergence measurement and sandwich certificates.

Everything here is numerical evidence on finite samples, not proof: sample
counts, seeds and measured margins are first-class fields of every result
so any claim can be reproduced bit for bit.  Samples used to tune (piece
selection, s search) are never reused for verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .domains import NEG_INF, ReinhardtDomain, ensure_validated
from .errors import ConvergenceCapError, InputError
from .green import eval_green
from .hommap import HomogeneousMap, build_map, eval_vs, eval_vs_many
from .pieces import MonomialSystem, eval_v

__all__ = [
    "SampleSet",
    "ErrorStat",
    "sample_level_set",
    "boundary_sample",
    "sup_error",
    "find_s0",
    "FindS0Result",
    "zero_locus_margin",
    "SandwichCertificate",
    "build_sandwich",
    "verify_certificate",
    "VerificationOutcome",
]


@dataclass
class SampleSet:
    points: np.ndarray  # (count, n) complex128
    kind: str  # sphere | torus_ray | level_set | boundary | dilated_boundary
    seed: int
    level: Optional[float] = None
    factor: Optional[float] = None
    redraws: int = 0

    @property
    def count(self) -> int:
        return self.points.shape[0]


def _sphere_directions(n: int, count: int, rng) -> np.ndarray:
    w = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return w / np.linalg.norm(w, axis=1, keepdims=True)


def torus_directions(n: int, count: int, seed: int) -> SampleSet:
    rng = np.random.default_rng(seed)
    pts = np.exp(1j * rng.uniform(-math.pi, math.pi, (count, n)))
    return SampleSet(pts, "torus_ray", seed)


def sphere_sample(n: int, count: int, seed: int, radius: float = 1.0) -> SampleSet:
    rng = np.random.default_rng(seed)
    return SampleSet(radius * _sphere_directions(n, count, rng), "sphere", seed)


def sample_level_set(
    u: Callable[[Sequence[complex]], float],
    n: int,
    t: float,
    count: int,
    seed: int,
    extra_directions: Sequence[Sequence[complex]] = (),
) -> SampleSet:
    """Points with u(point) = t exactly, by radial projection of directions.

    Requires u(c z) = u(z) + log|c|; then z = exp(t - u(w)) * w lies on the
    level set for any direction w with finite u(w).  Directions with
    u(w) = -inf are redrawn (and counted).
    """
    rng = np.random.default_rng(seed)
    dirs = [np.asarray(w, dtype=np.complex128) for w in extra_directions]
    redraws = 0
    while len(dirs) < count + len(extra_directions):
        w = _sphere_directions(n, 1, rng)[0]
        if u(w) == NEG_INF:
            redraws += 1
            if redraws > 100 * count + 100:
                raise InputError("level-set sampling keeps hitting -inf directions")
            continue
        dirs.append(w)
    pts = np.empty((len(dirs), n), dtype=np.complex128)
    for i, w in enumerate(dirs):
        uw = u(w)
        if uw == NEG_INF:
            raise InputError("extra direction evaluates to -inf")
        pts[i] = math.exp(t - uw) * w
    return SampleSet(pts, "level_set", seed, level=t, redraws=redraws)


def boundary_sample(
    domain: ReinhardtDomain, count: int, seed: int, dilation: float = 1.0
) -> SampleSet:
    """Random points of dilation * boundary(D), exact per family via G."""
    ensure_validated(domain)
    rng = np.random.default_rng(seed)
    pts = np.empty((count, domain.dim), dtype=np.complex128)
    filled = 0
    redraws = 0
    while filled < count:
        w = _sphere_directions(domain.dim, 1, rng)[0]
        g = eval_green(domain, w).value
        if g == NEG_INF:
            redraws += 1
            continue
        pts[filled] = dilation * math.exp(-g) * w
        filled += 1
    kind = "boundary" if dilation == 1.0 else "dilated_boundary"
    return SampleSet(pts, kind, seed, factor=dilation, redraws=redraws)


@dataclass
class ErrorStat:
    sup_error: float
    argmax_point: tuple
    mean_error: float
    count: int


def sup_error(f: Callable, g: Callable, samples: SampleSet) -> ErrorStat:
    """Max and mean of |f - g| over the sample, with the argmax point."""
    sup = -1.0
    arg = None
    total = 0.0
    for z in samples.points:
        d = abs(f(z) - g(z))
        total += d
        if d > sup:
            sup = d
            arg = tuple(complex(c) for c in z)
    return ErrorStat(sup, arg, total / samples.count, samples.count)


@dataclass
class FindS0Result:
    s: int
    map: HomogeneousMap
    table: list[tuple[int, ErrorStat]]


def find_s0(
    system: MonomialSystem,
    domain: ReinhardtDomain,
    epsilon: float,
    t: float = -1.0,
    s_start: int = 1,
    s_cap: int = 256,
    sample_count: int = 500,
    seed: int = 0,
    extra_directions: Sequence[Sequence[complex]] = (),
) -> FindS0Result:
    """Double s until sup |v_s - G| on a fresh level-set sample drops below eps.

    Each s gets a fresh sample of the level set {v = t}.  The error decay is
    usually close to monotone but is not required to be; the full table is
    returned for the report.
    """
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    ensure_validated(domain)
    v = lambda z: eval_v(system, z).value
    table: list[tuple[int, ErrorStat]] = []
    s = s_start
    index = 0
    best = (None, math.inf)
    while s <= s_cap:
        map_ = build_map(system, s)
        samples = sample_level_set(
            v, system.n, t, sample_count, seed + 101 * index, extra_directions
        )
        stat = sup_error(
            lambda z: eval_vs(map_, z),
            lambda z: eval_green(domain, z).value,
            samples,
        )
        table.append((s, stat))
        if stat.sup_error < best[1]:
            best = (s, stat.sup_error)
        if stat.sup_error < epsilon:
            return FindS0Result(s, map_, table)
        s *= 2
        index += 1
    raise ConvergenceCapError(best[0], best[1], s_cap)


def zero_locus_margin(map_: HomogeneousMap, count: int = 10_000, seed: int = 0) -> float:
    """min over the unit sphere of max_k |g_k|^(1/q_s).

    Positive margin is numerical evidence that the components share no zero
    besides the origin; by homogeneity a sphere check covers all of C^n.
    """
    if count < 1:
        raise InputError("need at least one sample point")
    samples = sphere_sample(map_.n, count, seed)
    vs = eval_vs_many(map_, samples.points)
    m = float(vs.min())
    return math.exp(m) if m > NEG_INF else 0.0


@dataclass
class SandwichCertificate:
    """Inclusion evidence for closure(D) in {max|p_k| < 1} in (1+eps)D.

    The polynomials p_k are the map components rescaled in log space by
    scale_log = -delta*q_s (exactly the substitution z -> exp(-delta) z for
    a degree-q_s homogeneous polynomial), so margins are computed from v_s:
    max_k q_s^{-1} log|p_k(z)| = v_s(z) - delta.
    """

    epsilon: float
    delta: float
    s: int
    q_s: int
    scale_log: float
    inner_margin: float  # max over boundary sample; passing requires < 0
    outer_margin: float  # min over dilated sample; passing requires >= 0
    zero_locus_margin: float  # passing requires > 0
    boundary_count: int
    zero_count: int
    seed: int
    passed: bool
    counterexample: Optional[tuple] = None


def build_sandwich(
    map_: HomogeneousMap,
    domain: ReinhardtDomain,
    epsilon: float,
    boundary_count: int = 10_000,
    zero_count: int = 10_000,
    seed: int = 0,
) -> SandwichCertificate:
    """Check the two-sided inclusion with delta = log(1+eps)/2.

    Callers must first establish sup |v_s - G| < delta on a level set of v
    (hence everywhere, by homogeneity); the checks here are independent of
    that tuning: fresh boundary and dilated-boundary samples.
    """
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    ensure_validated(domain)
    delta = 0.5 * math.log1p(epsilon)
    inner = boundary_sample(domain, boundary_count, seed + 7)
    outer = boundary_sample(domain, boundary_count, seed + 8, dilation=1.0 + epsilon)
    vs_inner = eval_vs_many(map_, inner.points)
    vs_outer = eval_vs_many(map_, outer.points)
    inner_margin = float(vs_inner.max()) - delta
    outer_margin = float(vs_outer.min()) - delta
    z_margin = zero_locus_margin(map_, zero_count, seed + 9)
    passed = inner_margin < 0 and outer_margin >= 0 and z_margin > 0
    counterexample = None
    if inner_margin >= 0:
        counterexample = tuple(complex(c) for c in inner.points[int(vs_inner.argmax())])
    elif outer_margin < 0:
        counterexample = tuple(complex(c) for c in outer.points[int(vs_outer.argmin())])
    return SandwichCertificate(
        epsilon=epsilon,
        delta=delta,
        s=map_.s,
        q_s=map_.q_s,
        scale_log=-delta * map_.q_s,
        inner_margin=inner_margin,
        outer_margin=outer_margin,
        zero_locus_margin=z_margin,
        boundary_count=boundary_count,
        zero_count=zero_count,
        seed=seed,
        passed=passed,
        counterexample=counterexample,
    )


@dataclass
class VerificationOutcome:
    ok: bool
    reason: str
    fresh: Optional[SandwichCertificate] = None


def verify_certificate(
    cert: SandwichCertificate,
    map_: HomogeneousMap,
    domain: ReinhardtDomain,
    seed: int,
) -> VerificationOutcome:
    """Re-run the margin checks with fresh seeds; confirm or refute.

    Consistency of the stored scalar fields is checked first (delta must be
    exactly log(1+eps)/2 under float semantics, scale_log must match), then
    the inclusion margins are re-measured with the stored counts.
    """
    if cert.delta != 0.5 * math.log1p(cert.epsilon):
        return VerificationOutcome(False, "stored delta does not equal log(1+eps)/2")
    if cert.q_s != map_.q_s or cert.s != map_.s:
        return VerificationOutcome(False, "certificate and map degrees disagree")
    if cert.scale_log != -cert.delta * cert.q_s:
        return VerificationOutcome(False, "stored scale_log does not match delta*q_s")
    fresh = build_sandwich(
        map_,
        domain,
        cert.epsilon,
        boundary_count=cert.boundary_count,
        zero_count=cert.zero_count,
        seed=seed,
    )
    if cert.passed and not fresh.passed:
        return VerificationOutcome(False, "fresh sampling refutes the stored margins", fresh)
    if not cert.passed and fresh.passed:
        return VerificationOutcome(False, "stored failure not reproduced", fresh)
    return VerificationOutcome(True, "confirmed", fresh)
