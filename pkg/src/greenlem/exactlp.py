"""Dense two-phase simplex solvers: exact over rationals, and floating point.

Programs are `maximize c.x subject to A x <= b` with unrestricted variables.
The exact solver works over `fractions.Fraction` with Bland (smallest index)
pivoting for entering and leaving variables, so it cannot cycle; Fraction
keeps every entry in lowest terms after each pivot.  The float solver runs
the same tableau algorithm with a pivot tolerance and flags results that
fail an a-posteriori feasibility check instead of silently trusting them.

Sizes here are desk scale (a handful of variables, dozens of rows); nothing
is sparse and nothing tries to be fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError

__all__ = [
    "LinearProgram",
    "LPResult",
    "LPError",
    "linear_program",
    "solve_lp_exact",
    "solve_lp_float",
    "cone_membership",
]

_MAX_PIVOTS = 200_000


class LPError(InputError):
    """Structurally malformed linear program."""


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact binary value of the float
    raise LPError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective.x  s.t.  constraint_matrix @ x <= rhs, x unrestricted."""

    objective: tuple[Fraction, ...]
    constraint_matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.objective)
        if n < 1:
            raise LPError("a linear program needs at least one variable")
        if len(self.constraint_matrix) != len(self.rhs):
            raise LPError("constraint matrix and rhs length mismatch")
        for row in self.constraint_matrix:
            if len(row) != n:
                raise LPError(f"constraint row of length {len(row)}, expected {n}")

    @property
    def n_vars(self) -> int:
        return len(self.objective)


def linear_program(objective: Sequence, rows: Sequence[Sequence], rhs: Sequence) -> LinearProgram:
    """Build a LinearProgram, converting entries to exact rationals."""
    return LinearProgram(
        tuple(_to_fraction(c) for c in objective),
        tuple(tuple(_to_fraction(a) for a in row) for row in rows),
        tuple(_to_fraction(v) for v in rhs),
    )


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "unbounded" | "infeasible"
    value: Optional[object] = None  # Fraction (exact) or float (float solver)
    optimizer: Optional[tuple] = None
    ray: Optional[tuple] = None  # certifying direction when unbounded
    flagged: bool = False  # float solver only: result needs the exact fallback


def _build_tableau(A, b, n, zero, one):
    """Standard form tableau.

    Columns: [x+ (n)] [x- (n)] [slacks (m)] [artificials] [rhs].
    Rows with negative rhs are flipped and get an artificial basic variable.
    """
    m = len(A)
    neg = [i for i in range(m) if b[i] < zero]
    art_col = {i: 2 * n + m + j for j, i in enumerate(neg)}
    width = 2 * n + m + len(neg) + 1
    T = []
    basis = [0] * m
    for i in range(m):
        row = [zero] * width
        sign = -one if i in art_col else one
        for k in range(n):
            a = A[i][k] * sign
            row[k] = a
            row[n + k] = -a
        row[2 * n + i] = sign
        row[-1] = b[i] * sign
        if i in art_col:
            row[art_col[i]] = one
            basis[i] = art_col[i]
        else:
            basis[i] = 2 * n + i
        T.append(row)
    return T, basis, sorted(art_col.values()), width


def _price(T, basis, c_std, width, zero):
    """Reduced-cost row: row0[j] = sum_i c_B[i]*T[i][j] - c_std[j]; rhs = value."""
    row0 = [-c_std[j] for j in range(width - 1)] + [zero]
    for i, bi in enumerate(basis):
        cb = c_std[bi]
        if cb != zero:
            trow = T[i]
            for j in range(width):
                row0[j] += cb * trow[j]
    return row0


def _pivot(T, row0, basis, leave, enter):
    piv_row = T[leave]
    piv = piv_row[enter]
    T[leave] = piv_row = [v / piv for v in piv_row]
    for r in T:
        if r is not piv_row and r[enter] != 0:
            f = r[enter]
            for j in range(len(r)):
                r[j] -= f * piv_row[j]
    if row0[enter] != 0:
        f = row0[enter]
        for j in range(len(row0)):
            row0[j] -= f * piv_row[j]
    basis[leave] = enter


def _iterate(T, row0, basis, allowed, tol):
    """Run simplex to optimality with Bland's rule. Returns (status, enter_col)."""
    m = len(T)
    for _ in range(_MAX_PIVOTS):
        enter = -1
        for j in allowed:
            if row0[j] < -tol:
                enter = j
                break
        if enter < 0:
            return "optimal", -1
        leave = -1
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > tol:
                ratio = T[i][-1] / a
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded", enter
        _pivot(T, row0, basis, leave, enter)
    return "stalled", -1


def _solve(objective, rows, rhs, exact: bool) -> LPResult:
    if exact:
        zero, one = Fraction(0), Fraction(1)
        tol = Fraction(0)
        c = [Fraction(x) for x in objective]
        A = [[Fraction(x) for x in row] for row in rows]
        b = [Fraction(x) for x in rhs]
    else:
        zero, one = 0.0, 1.0
        tol = 1e-11
        c = [float(x) for x in objective]
        A = [[float(x) for x in row] for row in rows]
        b = [float(x) for x in rhs]
    n = len(c)
    m = len(A)
    scale = max([one] + [bi if bi >= zero else -bi for bi in b])
    T, basis, art_cols, width = _build_tableau(A, b, n, zero, one)
    flagged = False

    if art_cols:
        c1 = [zero] * (width - 1)
        for j in art_cols:
            c1[j] = -one
        row0 = _price(T, basis, c1, width, zero)
        status, _ = _iterate(T, row0, basis, range(width - 1), tol)
        if status == "stalled":
            if exact:
                raise LPError("phase-1 pivot budget exceeded")
            flagged = True
        feas_gap = -row0[-1]  # = sum of artificial values at optimum, >= 0
        infeas_tol = zero if exact else 1e-8 * scale
        if feas_gap > infeas_tol:
            return LPResult(status="infeasible", flagged=flagged)
        # Drive artificials out of the basis; rows that cannot pivot are
        # redundant and their artificial stays locked at level zero.
        art_set = set(art_cols)
        for i in range(m):
            if basis[i] in art_set:
                for j in range(2 * n + m):
                    a = T[i][j]
                    if (a if a >= zero else -a) > tol:
                        _pivot(T, row0, basis, i, j)
                        break

    c2 = [zero] * (width - 1)
    for k in range(n):
        c2[k] = c[k]
        c2[n + k] = -c[k]
    row0 = _price(T, basis, c2, width, zero)
    allowed = [j for j in range(width - 1) if j < 2 * n + m]
    status, enter = _iterate(T, row0, basis, allowed, tol)
    if status == "stalled":
        if exact:
            raise LPError("phase-2 pivot budget exceeded")
        flagged = True
        status = "optimal"
        enter = -1
    if status == "unbounded":
        d = [zero] * (width - 1)
        d[enter] = one
        for i, bi in enumerate(basis):
            d[bi] = -T[i][enter]
        ray = tuple(d[k] - d[n + k] for k in range(n))
        return LPResult(status="unbounded", ray=ray, flagged=flagged)

    xstd = [zero] * (width - 1)
    for i, bi in enumerate(basis):
        xstd[bi] = T[i][-1]
    x = tuple(xstd[k] - xstd[n + k] for k in range(n))
    value = sum((ck * xk for ck, xk in zip(c, x)), zero)
    if not exact:
        for row, bi in zip(A, b):
            resid = sum(rk * xk for rk, xk in zip(row, x)) - bi
            if resid > 1e-7 * scale:
                flagged = True
                break
    return LPResult(status="optimal", value=value, optimizer=x, flagged=flagged)


def solve_lp_exact(lp: LinearProgram) -> LPResult:
    """Exact rational optimum of `lp`; status and value carry no rounding."""
    return _solve(lp.objective, lp.constraint_matrix, lp.rhs, exact=True)


def solve_lp_float(lp: LinearProgram) -> LPResult:
    """Floating-point solve of `lp`; `flagged` results should fall back to exact."""
    return _solve(lp.objective, lp.constraint_matrix, lp.rhs, exact=False)


def cone_membership(generators: Sequence[Sequence], target: Sequence) -> bool:
    """Decide exactly whether target lies in the conical hull of the generators.

    True iff target = sum_i y_i * generators[i] has a solution with y >= 0,
    settled by an exact feasibility solve (the phase-1 problem).
    """
    tgt = [_to_fraction(t) for t in target]
    n = len(tgt)
    gens = [[_to_fraction(g) for g in gen] for gen in generators]
    for gen in gens:
        if len(gen) != n:
            raise LPError("generator/target dimension mismatch")
    if not gens:
        return all(t == 0 for t in tgt)
    mg = len(gens)
    rows = []
    rhs = []
    for k in range(n):
        rows.append([gens[i][k] for i in range(mg)])
        rhs.append(tgt[k])
        rows.append([-gens[i][k] for i in range(mg)])
        rhs.append(-tgt[k])
    for i in range(mg):
        rows.append([Fraction(-1) if j == i else Fraction(0) for j in range(mg)])
        rhs.append(Fraction(0))
    lp = linear_program([0] * mg, rows, rhs)
    return solve_lp_exact(lp).status == "optimal"
