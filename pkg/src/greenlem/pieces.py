"""Piecewise-log-linear lower approximants of the Green function.

A support piece (theta, b) with b = h(theta) defines the affine function
<theta, x> - b in log coordinates, which supports the convex Green function
from below.  Finitely many pieces give

    u(x) = max_j { <theta_j, x> - b_j } <= G(x),

with equality where some theta_j maximizes the sup representation.  The
pieces are then rationalized (slopes into r * simplex with bounded
denominators, offsets rounded upward), certified to be in general position
at a fixed level t (no point of the level set lies on more than n pieces,
decided exactly over the rationals for every (n+1)-subset), and finally
emitted as monomials

    g_j(z) = exp(-N b_j) z^(N a_j)     of common degree q = r N,

so that q^{-1} max_j log|g_j| reproduces the rational approximant.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from . import exactlp
from .domains import NEG_INF, ReinhardtDomain, ensure_validated, support_h
from .errors import GeneralPositionError, InputError, SelectionBudgetError
from .green import PointLike, eval_green, log_moduli, _dot_skip_zero
from .grids import barycentric_grid

logger = logging.getLogger(__name__)

__all__ = [
    "SupportPiece",
    "RationalPiece",
    "RationalPL",
    "Monomial",
    "MonomialSystem",
    "SelectionBudget",
    "SelectionResult",
    "exact_pieces_polyhedral",
    "select_support_pieces",
    "rationalize",
    "check_general_position",
    "GeneralPositionResult",
    "emit_monomials",
    "eval_v",
    "PLValue",
]


@dataclass(frozen=True)
class SupportPiece:
    theta: tuple[float, ...]
    b: float


@dataclass(frozen=True)
class RationalPiece:
    a: tuple[Fraction, ...]
    b: Fraction


@dataclass
class RationalPL:
    pieces: tuple[RationalPiece, ...]
    r: Fraction
    t: Fraction
    gp_certified: bool = False
    perturbation_norm: float = 0.0

    @property
    def n(self) -> int:
        return len(self.pieces[0].a)

    @property
    def m(self) -> int:
        return len(self.pieces)


@dataclass(frozen=True)
class Monomial:
    k_vec: tuple[int, ...]
    log_coef: Fraction


@dataclass(frozen=True)
class MonomialSystem:
    monomials: tuple[Monomial, ...]
    N: int
    r: Fraction
    q: int
    n: int

    def __post_init__(self):
        if Fraction(self.q) != self.r * self.N:
            raise InputError("degree q must equal r*N exactly")
        for mono in self.monomials:
            if len(mono.k_vec) != self.n:
                raise InputError("monomial exponent dimension mismatch")
            if sum(mono.k_vec) != self.q:
                raise InputError("monomial degree mismatch")

    @property
    def m(self) -> int:
        return len(self.monomials)


def exact_pieces_polyhedral(domain: ReinhardtDomain) -> list[SupportPiece]:
    """Pieces that reproduce the Green function of a polyhedron exactly."""
    ensure_validated(domain)
    if domain.kind != "polyhedral":
        raise InputError("exact pieces exist only for polyhedral domains")
    pieces = []
    for c in domain.constraints:
        s = sum(c.alpha)
        theta = tuple(float(a / s) for a in c.alpha)
        b = float(c.log_bound_exact() / s)
        pieces.append(SupportPiece(theta, b))
    return pieces


@dataclass
class SelectionBudget:
    max_resolution: int = 1024
    sample_count: int = 2000
    seed: int = 0


@dataclass
class SelectionResult:
    pieces: list[SupportPiece]
    measured_sup: float
    resolution: int
    sample_count: int
    seed: int


def _prune_unexposed(exact_pieces: list[tuple[tuple[Fraction, ...], Fraction]]):
    """Drop pieces that are nowhere strictly above all the others.

    Piece j survives iff  max delta  s.t.  <t_i - t_j, x> + delta <= b_i - b_j
    for all i != j  is positive (or unbounded).  Exact LP keeps this a
    clean yes/no even for grid pieces meeting only along lower-dimensional
    sets, e.g. the mixed pieces of a polydisk.
    """
    if len(exact_pieces) <= 1:
        return list(exact_pieces)
    n = len(exact_pieces[0][0])
    kept = []
    for j, (tj, bj) in enumerate(exact_pieces):
        rows = []
        rhs = []
        for i, (ti, bi) in enumerate(exact_pieces):
            if i == j:
                continue
            rows.append([ti[k] - tj[k] for k in range(n)] + [Fraction(1)])
            rhs.append(bi - bj)
        objective = [Fraction(0)] * n + [Fraction(1)]
        res = exactlp.solve_lp_exact(exactlp.linear_program(objective, rows, rhs))
        if res.status == "unbounded" or (res.status == "optimal" and res.value > 0):
            kept.append(exact_pieces[j])
    return kept


def _shell_directions(n: int, count: int, rng) -> np.ndarray:
    w = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    norms = np.linalg.norm(w, axis=1, keepdims=True)
    return w / norms


def select_support_pieces(
    domain: ReinhardtDomain,
    epsilon: float,
    t: float = -1.0,
    budget: Optional[SelectionBudget] = None,
    initial_resolution: int = 8,
) -> SelectionResult:
    """Refine a barycentric grid until the shell error of u drops below eps/2.

    The error sup(G - u) is measured over a random sample of the shell
    {t <= G <= 0}; it is scale-invariant because both G and u are
    1-homogeneous in log scale, so direction sampling already covers the
    shell.  Grids are nested under doubling, hence the measured error is
    non-increasing along the refinement.
    """
    ensure_validated(domain)
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    if t >= 0:
        raise InputError("shell level t must be negative")
    budget = budget or SelectionBudget()
    n = domain.dim
    rng = np.random.default_rng(budget.seed)
    dirs = _shell_directions(n, budget.sample_count, rng)
    radial = np.exp(rng.uniform(t, 0.0, budget.sample_count))
    target = epsilon / 2.0
    best = math.inf
    d = initial_resolution
    while d <= budget.max_resolution:
        exact_pieces = []
        for theta in barycentric_grid(n, d):
            tf = tuple(float(v) for v in theta)
            b = support_h(domain, tf)
            exact_pieces.append((theta, Fraction(b)))
        exact_pieces = _prune_unexposed(exact_pieces)
        pieces = [
            SupportPiece(tuple(float(a) for a in theta), float(b))
            for theta, b in exact_pieces
        ]
        sup_err = 0.0
        for w, rad in zip(dirs, radial):
            g = eval_green(domain, w).value
            z = rad * math.exp(-g) * w  # a point with G(z) = log(rad) in [t, 0]
            gz = eval_green(domain, z).value
            uz = max(
                _dot_skip_zero(p.theta, log_moduli(z)) - p.b for p in pieces
            )
            sup_err = max(sup_err, gz - uz)
        best = min(best, sup_err)
        if sup_err < target:
            return SelectionResult(pieces, sup_err, d, budget.sample_count, budget.seed)
        d *= 2
    raise SelectionBudgetError(best, d // 2)


def _round_theta(theta: Sequence[float], denom_bound: int) -> tuple[Fraction, ...]:
    """Nearest rationals with bounded denominators, summing exactly to 1.

    Zero entries are never perturbed.  First tries per-entry rounding (which
    recovers grid points exactly); if the sum misses 1, falls back to a
    largest-remainder split over the common denominator `denom_bound`.
    """
    exact = tuple(
        Fraction(t).limit_denominator(denom_bound) if t > 0 else Fraction(0)
        for t in theta
    )
    if sum(exact) == 1:
        return exact
    q = denom_bound
    nz = [i for i, t in enumerate(theta) if t > 0]
    floors = {}
    rems = []
    total = 0
    for i in nz:
        v = Fraction(theta[i]) * q
        f = math.floor(v)
        floors[i] = f
        rems.append((v - f, -i))
        total += f
    leftover = q - total
    if leftover < 0 or leftover > len(nz):
        raise InputError("theta is too far from the simplex to rationalize")
    for _, neg_i in sorted(rems, reverse=True)[:leftover]:
        floors[-neg_i] += 1
    out = [Fraction(0)] * len(theta)
    for i in nz:
        out[i] = Fraction(floors[i], q)
    return tuple(out)


@dataclass
class GeneralPositionResult:
    passed: bool
    witness: Optional[tuple[int, ...]] = None


def _rational_system_solvable(rows: list[Sequence[Fraction]], rhs: list[Fraction]) -> bool:
    """Exact solvability of the (usually overdetermined) system rows.x = rhs."""
    n = len(rows[0])
    aug = [list(row) + [r] for row, r in zip(rows, rhs)]
    m = len(aug)
    rank = 0
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        prow = aug[rank]
        inv = 1 / prow[col]
        for i in range(m):
            if i != rank and aug[i][col] != 0:
                f = aug[i][col] * inv
                for j in range(col, n + 1):
                    aug[i][j] -= f * prow[j]
        rank += 1
    return all(aug[i][n] == 0 for i in range(rank, m))


def check_general_position(pl: RationalPL, t: Optional[Fraction] = None) -> GeneralPositionResult:
    """Exact test that no (n+1)-subset of pieces meets at level t.

    For every index set J with |J| = n+1 the system <a_j, x> = b_j + r*t
    must be unsolvable over the rationals (rank of the coefficient matrix
    equals the rank of the augmented matrix only for solvable systems).
    Deciding all C(m, n+1) subsets is feasible at the sizes the pipeline
    produces.  The verdict does not depend on the order of the pieces.
    """
    t = pl.t if t is None else Fraction(t)
    n = pl.n
    m = pl.m
    if m <= n:
        return GeneralPositionResult(True)
    rt = pl.r * t
    for J in combinations(range(m), n + 1):
        rows = [pl.pieces[j].a for j in J]
        rhs = [pl.pieces[j].b + rt for j in J]
        if _rational_system_solvable(rows, rhs):
            return GeneralPositionResult(False, J)
    return GeneralPositionResult(True)


def rationalize(
    pieces: Sequence[SupportPiece],
    t: Fraction = Fraction(-1),
    denom_bound: int = 100_000,
    seed: int = 0,
    max_attempts: int = 64,
) -> RationalPL:
    """Rational slopes on the simplex slice, offsets rounded upward.

    Offsets are rounded up (b_tilde >= b) so the rationalized approximant
    never overshoots the Green function through coefficient rounding alone.
    If the general-position certificate fails, the offsets of the violating
    pieces get small positive random perturbations; after repeated failures
    the slice sum r is nudged off 1 as a last-resort direction.  The
    recorded perturbation norm is the max over pieces of the l1 change of
    the slope plus the offset change.
    """
    if not pieces:
        raise InputError("no pieces to rationalize")
    if not (Fraction(t) < 0):
        raise InputError("certification level t must be negative")
    t = Fraction(t)
    rng = random.Random(seed)
    a_base = [_round_theta(p.theta, denom_bound) for p in pieces]
    a_list = list(a_base)
    b_list = [Fraction(math.ceil(Fraction(p.b) * denom_bound), denom_bound) for p in pieces]
    r = Fraction(1)
    b_only_attempts = max_attempts * 3 // 4
    witness = None
    for attempt in range(max_attempts):
        rational_pieces = tuple(RationalPiece(a, b) for a, b in zip(a_list, b_list))
        pl = RationalPL(rational_pieces, r, t)
        result = check_general_position(pl)
        if result.passed:
            norm = 0.0
            for p, a, b in zip(pieces, a_list, b_list):
                da = sum(abs(float(ak) - tk) for ak, tk in zip(a, p.theta))
                norm = max(norm, da + abs(float(b) - p.b))
            pl.gp_certified = True
            pl.perturbation_norm = norm
            return pl
        witness = result.witness
        if attempt < b_only_attempts:
            for j in witness:
                b_list[j] += Fraction(rng.randint(1, 9), 8 * denom_bound)
        else:
            r = 1 + Fraction(rng.randint(1, 4), 4 * denom_bound)
            a_list = [tuple(ak * r for ak in a) for a in a_base]
            logger.warning(
                "general position kept failing with r=1; retrying on the r-slice r=%s", r
            )
    raise GeneralPositionError(witness)


def emit_monomials(pl: RationalPL) -> MonomialSystem:
    """Clear denominators: N = lcm of all slope denominators (and of r)."""
    if not pl.gp_certified:
        raise InputError("emit_monomials requires a general-position certificate")
    dens = {pl.r.denominator}
    for piece in pl.pieces:
        dens.update(a.denominator for a in piece.a)
    N = math.lcm(*dens)
    q_frac = pl.r * N
    q = int(q_frac)
    monomials = []
    for piece in pl.pieces:
        k_vec = tuple(int(a * N) for a in piece.a)
        monomials.append(Monomial(k_vec, -N * piece.b))
    return MonomialSystem(tuple(monomials), N=N, r=pl.r, q=q, n=pl.n)


@dataclass(frozen=True)
class PLValue:
    value: float
    active: tuple[int, ...]


def eval_v(
    system: Union[MonomialSystem, RationalPL], z: PointLike, tie_tol: float = 1e-9
) -> PLValue:
    """v(z) = q^{-1} max_j log|g_j(z)|, with the indices achieving the max.

    Only the moduli of z matter.  The active set collects every index whose
    normalized value sits within `tie_tol` of the maximum.
    """
    x = log_moduli(z)
    if isinstance(system, MonomialSystem):
        vals = [
            (_dot_skip_zero(mono.k_vec, x) + float(mono.log_coef)) / system.q
            for mono in system.monomials
        ]
    else:
        r = float(system.r)
        vals = [
            (_dot_skip_zero([float(a) for a in piece.a], x) - float(piece.b)) / r
            for piece in system.pieces
        ]
    value = max(vals)
    if value == NEG_INF:
        return PLValue(NEG_INF, ())
    active = tuple(j for j, v in enumerate(vals) if value - v <= tie_tol)
    return PLValue(value, active)
