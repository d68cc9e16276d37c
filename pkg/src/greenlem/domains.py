"""Bounded, polynomially convex Reinhardt domains and their support data.

Two concrete families are supported:

* monomial polyhedra  {z : |z^alpha_i| < c_i, i = 1..M}  with alpha_i >= 0,
* weighted p-balls    {z : sum_k w_k |z_k|^p < 1}.

Both are complete and logarithmically convex by construction, which for
Reinhardt domains is the same as polynomial convexity.  The central object
is the support function h of the logarithmic image

    h(theta) = sup { sum_k theta_k x_k : x in log|D| },   theta in the simplex,

computed by exact LP for polyhedra and in closed form for weighted balls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import exactlp
from .errors import DomainValidationError, InputError
from .grids import barycentric_grid

NEG_INF = float("-inf")

SIMPLEX_TOL = 1e-9  # how far theta may sit outside the simplex before rejection


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise InputError(f"cannot interpret {x!r} as a rational")


def exponent_vector(entries: Sequence) -> tuple[Fraction, ...]:
    """Validated exponent vector: nonnegative rationals, not all zero."""
    vec = tuple(_as_fraction(e) for e in entries)
    if not vec:
        raise InputError("empty exponent vector")
    if any(e < 0 for e in vec):
        raise InputError("exponent vector entries must be nonnegative")
    if all(e == 0 for e in vec):
        raise InputError("exponent vector must have a positive entry")
    return vec


@dataclass(frozen=True)
class MonomialConstraint:
    """One defining inequality |z^alpha| < bound.

    `log_bound` optionally carries an exact rational value for log(bound);
    when absent, the exact computations use the binary value of the float.
    """

    alpha: tuple[Fraction, ...]
    bound: float
    log_bound: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", exponent_vector(self.alpha))
        if not (self.bound > 0):
            raise InputError("constraint bound must be positive")

    def log_bound_exact(self) -> Fraction:
        if self.log_bound is not None:
            return self.log_bound
        return Fraction(math.log(self.bound))


@dataclass(eq=False)
class ReinhardtDomain:
    """Immutable after construction; `validated` is set by validate()."""

    dim: int
    kind: str  # "polyhedral" | "weighted_ball"
    constraints: tuple[MonomialConstraint, ...] = ()
    p: float = 0.0
    weights: tuple[float, ...] = ()
    validated: bool = False

    def __post_init__(self):
        if self.kind not in ("polyhedral", "weighted_ball"):
            raise InputError(f"unknown domain kind {self.kind!r}")
        if self.kind == "polyhedral":
            if not self.constraints:
                raise InputError("polyhedral domain needs at least one constraint")
            for c in self.constraints:
                if len(c.alpha) != self.dim:
                    raise InputError("constraint dimension mismatch")
        else:
            if len(self.weights) != self.dim:
                raise InputError("weights length must equal dim")


def polyhedral_domain(constraints: Sequence[MonomialConstraint]) -> ReinhardtDomain:
    constraints = tuple(constraints)
    if not constraints:
        raise InputError("polyhedral domain needs at least one constraint")
    return ReinhardtDomain(dim=len(constraints[0].alpha), kind="polyhedral", constraints=constraints)


def weighted_ball(p: float, weights: Sequence[float]) -> ReinhardtDomain:
    return ReinhardtDomain(dim=len(tuple(weights)), kind="weighted_ball", p=float(p), weights=tuple(float(w) for w in weights))


def polydisk(radii: Sequence[float]) -> ReinhardtDomain:
    """Product of disks {|z_k| < r_k} as a monomial polyhedron."""
    radii = tuple(radii)
    n = len(radii)
    cons = []
    for k, r in enumerate(radii):
        alpha = [Fraction(0)] * n
        alpha[k] = Fraction(1)
        log_b = Fraction(0) if r == 1.0 else None
        cons.append(MonomialConstraint(tuple(alpha), float(r), log_b))
    return polyhedral_domain(cons)


@dataclass
class ValidationFailure:
    code: str
    message: str
    witness: Optional[tuple] = None


@dataclass
class ValidationReport:
    ok: bool
    failures: list[ValidationFailure] = field(default_factory=list)


def validate(domain: ReinhardtDomain) -> ValidationReport:
    """Semantic validation; never raises on semantic failure.

    Polyhedral: nonempty log-image (LP feasibility) and boundedness, i.e.
    every coordinate direction e_k lies in the conical hull of the exponent
    vectors.  An unbounded direction is returned as a witness ray in
    log coordinates.  Weighted balls: positive p and weights.
    """
    failures: list[ValidationFailure] = []
    if domain.dim < 2:
        failures.append(ValidationFailure("dim", "ambient dimension must be >= 2"))
    if domain.kind == "polyhedral":
        alphas = [c.alpha for c in domain.constraints]
        logbs = [c.log_bound_exact() for c in domain.constraints]
        feas = exactlp.solve_lp_exact(
            exactlp.linear_program([0] * domain.dim, alphas, logbs)
        )
        if feas.status == "infeasible":
            failures.append(ValidationFailure("empty", "logarithmic image is empty"))
        for k in range(domain.dim):
            e_k = [Fraction(1) if j == k else Fraction(0) for j in range(domain.dim)]
            if not exactlp.cone_membership(alphas, e_k):
                ray_res = exactlp.solve_lp_exact(
                    exactlp.linear_program(e_k, alphas, logbs)
                )
                witness = None
                if ray_res.status == "unbounded":
                    witness = tuple(float(v) for v in ray_res.ray)
                failures.append(
                    ValidationFailure(
                        "unbounded",
                        f"domain is unbounded: e_{k + 1} is not in the cone of exponents",
                        witness,
                    )
                )
    else:
        if not (domain.p > 0):
            failures.append(ValidationFailure("p", "exponent p must be positive"))
        if any(not (w > 0) for w in domain.weights):
            failures.append(ValidationFailure("weights", "weights must be positive"))
    report = ValidationReport(ok=not failures, failures=failures)
    if report.ok:
        domain.validated = True
    return report


def ensure_validated(domain: ReinhardtDomain) -> None:
    if domain.validated:
        return
    report = validate(domain)
    if not report.ok:
        raise DomainValidationError(report)


def _check_simplex(theta: Sequence[float], n: int) -> None:
    if len(theta) != n:
        raise InputError(f"theta has length {len(theta)}, expected {n}")
    total = 0.0
    for t in theta:
        t = float(t)
        if t < -SIMPLEX_TOL:
            raise InputError(f"theta entry {t} is negative")
        total += t
    if abs(total - 1.0) > SIMPLEX_TOL:
        raise InputError(f"theta sums to {total}, not 1")


def support_h_exact(domain: ReinhardtDomain, theta: Sequence[Fraction]) -> Fraction:
    """Exact support value for a polyhedral domain at rational theta."""
    ensure_validated(domain)
    if domain.kind != "polyhedral":
        raise InputError("exact support values exist only for polyhedral domains")
    theta = [_as_fraction(t) for t in theta]
    _check_simplex([float(t) for t in theta], domain.dim)
    theta = [t if t > 0 else Fraction(0) for t in theta]  # clamp tolerated noise
    lp = exactlp.linear_program(
        theta,
        [c.alpha for c in domain.constraints],
        [c.log_bound_exact() for c in domain.constraints],
    )
    res = exactlp.solve_lp_exact(lp)
    if res.status != "optimal":
        raise InputError(f"support LP unexpectedly {res.status}")
    return res.value


def support_h(domain: ReinhardtDomain, theta: Sequence[float]) -> float:
    """Support function of log|D| on the simplex.

    Polyhedral domains use the exact LP on the exact rational image of the
    inputs; weighted balls use the closed form

        h(theta) = (1/p) * sum_k theta_k log(theta_k / w_k),   0 log 0 := 0,

    which is the Lagrange maximum of <theta, x> over the boundary.
    """
    ensure_validated(domain)
    _check_simplex(theta, domain.dim)
    if domain.kind == "polyhedral":
        frac_theta = [_as_fraction(t) if t > 0 else Fraction(0) for t in theta]
        return float(support_h_exact(domain, frac_theta))
    acc = 0.0
    for t, w in zip(theta, domain.weights):
        t = float(t)
        if t > 0.0:
            acc += t * math.log(t / w)
    return acc / domain.p


@dataclass(frozen=True)
class Containment:
    location: str  # "inside" | "boundary" | "outside"
    slack: float  # most-violated signed margin in log scale; negative inside


def _log_or_neginf(v: float) -> float:
    return math.log(v) if v > 0 else NEG_INF


def contains(domain: ReinhardtDomain, modulus: Sequence[float], boundary_tol: float = 1e-9) -> Containment:
    """Membership of a modulus vector |z| against the defining inequalities."""
    ensure_validated(domain)
    mods = [float(m) for m in modulus]
    if len(mods) != domain.dim:
        raise InputError("modulus vector dimension mismatch")
    if any(m < 0 for m in mods):
        raise InputError("modulus entries must be nonnegative")
    x = [_log_or_neginf(m) for m in mods]
    if domain.kind == "polyhedral":
        slack = NEG_INF
        for c in domain.constraints:
            acc = 0.0
            dead = False
            for a, xk in zip(c.alpha, x):
                if a != 0:
                    if xk == NEG_INF:
                        dead = True
                        break
                    acc += float(a) * xk
            val = NEG_INF if dead else acc - float(c.log_bound_exact())
            slack = max(slack, val)
    else:
        total = sum(w * m**domain.p for w, m in zip(domain.weights, mods))
        slack = _log_or_neginf(total) / domain.p
    if slack < -boundary_tol:
        return Containment("inside", slack)
    if slack <= boundary_tol:
        return Containment("boundary", slack)
    return Containment("outside", slack)


def hull_from_points(
    points: Sequence[Sequence[float]],
    margin: float = 0.0,
    grid_resolution: int = 2,
    floor_exponent: float = 40.0,
) -> ReinhardtDomain:
    """Outer polyhedral hull of a compact Reinhardt point cloud.

    For every theta on the barycentric grid at the given resolution, emits
    the constraint <theta, x> <= h_K(theta) + margin where h_K is the support
    maximum over the input points; exponent vectors are scaled to primitive
    integers.  The grid contains the simplex vertices, so the result is
    bounded by construction, and every input point is contained with slack
    at most `margin` by construction.  Coordinates below exp(-floor_exponent)
    are clamped up to that floor before taking logs.
    """
    pts = [tuple(float(c) for c in p) for p in points]
    if not pts:
        raise InputError("need at least one point")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise InputError("inconsistent point dimensions")
    if any(c < 0 for p in pts for c in p):
        raise InputError("points must be modulus vectors (nonnegative)")
    if margin < 0:
        raise InputError("margin must be nonnegative")
    if grid_resolution < 1:
        raise InputError("grid resolution must be >= 1")
    floor = math.exp(-float(floor_exponent))
    logs = [tuple(math.log(max(c, floor)) for c in p) for p in pts]
    constraints = []
    for theta in barycentric_grid(n, grid_resolution):
        tf = [float(t) for t in theta]
        h_k = max(sum(t * x for t, x in zip(tf, lp)) for lp in logs)
        scale = math.lcm(*(t.denominator for t in theta))
        alpha = tuple(Fraction(int(t * scale)) for t in theta)
        log_bound = Fraction(h_k + margin) * scale
        constraints.append(
            MonomialConstraint(alpha, math.exp(float(log_bound)), log_bound)
        )
    domain = polyhedral_domain(constraints)
    report = validate(domain)
    if not report.ok:  # unreachable by construction; kept as a guard
        raise DomainValidationError(report)
    return domain


@lru_cache(maxsize=64)
def support_on_grid(domain: ReinhardtDomain, resolution: int) -> tuple:
    """Cached (theta_floats, h) pairs over the barycentric grid."""
    ensure_validated(domain)
    out = []
    for theta in barycentric_grid(domain.dim, resolution):
        tf = tuple(float(t) for t in theta)
        out.append((tf, support_h(domain, tf)))
    return tuple(out)
