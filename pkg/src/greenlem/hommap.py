"""Homogeneous n-component maps from elementary symmetric combinations.

Given monomials g_1..g_m of common degree q and a power s, the map has
components

    g_k = ( sum_{j_1 < ... < j_k} g_{j_1}^s ... g_{j_k}^s )^{n!/k},  k = 1..n,

all homogeneous of degree q_s = q*s*n!.  Expanded coefficients are
astronomically large long before s gets interesting, so nothing on the main
path ever expands: evaluation carries (log-modulus, phase) pairs, the
k-subset sums go through the `_kernels` backend (max log-sum factored out,
compensated accumulation), and only |g_k| enters the normalized envelope

    v_s(z) = q_s^{-1} max_k log|g_k(z)|.

`expand_symbolic` provides an exact expansion oracle for small cases only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import _kernels
from .domains import NEG_INF
from .errors import ExpansionCapError, InputError
from .pieces import MonomialSystem

__all__ = [
    "ComplexLogValue",
    "HomogeneousMap",
    "SymbolicExpansion",
    "build_map",
    "eval_component",
    "eval_components",
    "eval_vs",
    "eval_vs_many",
    "expand_symbolic",
    "evaluate_expansion_component",
]

TWO_PI = 2.0 * math.pi
# Above this scale of s*q, double products lose too many phase bits and the
# argument reduction switches to arbitrary precision.
PHASE_EXACT_LIMIT = 2**40

MAX_DIMENSION = 6  # keeps n! exponent arithmetic comfortably in 64-bit range


@dataclass(frozen=True)
class ComplexLogValue:
    """log|w| and arg(w) in (-pi, pi]; zero carries phase 0 by convention."""

    log_modulus: float
    phase: float


@dataclass(eq=False)
class HomogeneousMap:
    system: MonomialSystem
    s: int

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def m(self) -> int:
        return self.system.m

    @property
    def q_s(self) -> int:
        return self.system.q * self.s * math.factorial(self.system.n)


def build_map(system: MonomialSystem, s: int) -> HomogeneousMap:
    if s < 1:
        raise InputError("power s must be a positive integer")
    if system.m < system.n:
        raise InputError(
            f"need at least n={system.n} monomials for the elementary symmetric "
            f"components; got m={system.m}"
        )
    if system.n > MAX_DIMENSION:
        raise InputError(f"dimension {system.n} exceeds the supported limit {MAX_DIMENSION}")
    return HomogeneousMap(system, s)


def _reduce_phase(v: float) -> float:
    r = math.remainder(v, TWO_PI)
    return math.pi if r == -math.pi else r


def _unit_pow(u: complex, e: int) -> complex:
    """u^e for |u| = 1 by binary powering; exact on the axes (1, -1, i, -i).

    The tiny modulus drift of generic inputs is divided out so only the
    phase carries rounding error, of the same order as direct angle
    multiplication would give.
    """
    result = complex(1.0, 0.0)
    base = u
    while e:
        if e & 1:
            result *= base
        e >>= 1
        if e:
            base *= base
    mag = abs(result)
    return result / mag if mag > 0 else complex(1.0, 0.0)


def _phase_mp(k_vec: Sequence[int], args: Sequence[float], s: int) -> float:
    import mpmath

    bits = max(v * s for v in k_vec).bit_length() + 64
    with mpmath.workprec(bits):
        acc = mpmath.mpf(0)
        for k, a in zip(k_vec, args):
            if k:
                acc += mpmath.mpf(k) * mpmath.mpf(a)
        acc *= s
        red = mpmath.fmod(acc, 2 * mpmath.pi)
        if red > mpmath.pi:
            red -= 2 * mpmath.pi
        elif red <= -mpmath.pi:
            red += 2 * mpmath.pi
        return float(red)


def _monomial_log_values(map_: HomogeneousMap, z: Sequence[complex]):
    """Per-monomial log-modulus and unit phase factor of g_j(z)^s.

    Log-moduli are exact at coordinate zeros (-inf propagates only through
    positive exponents); phase factors are cartesian units built by binary
    powering of z_k/|z_k| so that exact cancellations stay exact.  Beyond
    the double-precision phase budget (s*q > 2^40) the argument reduction
    switches to arbitrary precision.
    """
    sys_ = map_.system
    if len(z) != sys_.n:
        raise InputError("point dimension mismatch")
    x = []
    units = []
    args = []
    for c in z:
        c = complex(c)
        m = abs(c)
        x.append(math.log(m) if m > 0 else NEG_INF)
        units.append(c / m if m > 0 else complex(1.0, 0.0))
        args.append(cmath.phase(c) if m > 0 else 0.0)
    s = map_.s
    exact_phases = s * sys_.q > PHASE_EXACT_LIMIT
    L = np.empty(sys_.m)
    UR = np.empty(sys_.m)
    UI = np.empty(sys_.m)
    for j, mono in enumerate(sys_.monomials):
        acc = 0.0
        dead = False
        for k, xk in zip(mono.k_vec, x):
            if k:
                if xk == NEG_INF:
                    dead = True
                    break
                acc += k * xk
        if dead:
            L[j] = NEG_INF
            UR[j] = 1.0
            UI[j] = 0.0
            continue
        L[j] = s * (acc + float(mono.log_coef))
        if exact_phases:
            ph = _phase_mp(mono.k_vec, args, s)
            u = complex(math.cos(ph), math.sin(ph))
        else:
            u = complex(1.0, 0.0)
            for k, uk in zip(mono.k_vec, units):
                if k:
                    u *= _unit_pow(uk, s * k)
            mag = abs(u)
            u = u / mag if mag > 0 else complex(1.0, 0.0)
        UR[j] = u.real
        UI[j] = u.imag
    return L, UR, UI


def eval_components(map_: HomogeneousMap, z: Sequence[complex]) -> list[ComplexLogValue]:
    """All n components of the map at z, in log-polar form."""
    L, UR, UI = _monomial_log_values(map_, z)
    logs, phases = _kernels.esym_log_complex(L, UR, UI, map_.n)
    nfact = math.factorial(map_.n)
    out = []
    for k in range(1, map_.n + 1):
        scale = nfact // k
        lm = float(logs[k - 1])
        if lm == NEG_INF:
            out.append(ComplexLogValue(NEG_INF, 0.0))
        else:
            out.append(
                ComplexLogValue(scale * lm, _reduce_phase(scale * float(phases[k - 1])))
            )
    return out


def eval_component(map_: HomogeneousMap, k: int, z: Sequence[complex]) -> ComplexLogValue:
    if not 1 <= k <= map_.n:
        raise InputError(f"component index {k} out of range 1..{map_.n}")
    return eval_components(map_, z)[k - 1]


def eval_vs(map_: HomogeneousMap, z: Sequence[complex], clamp_plus: bool = False) -> float:
    """v_s(z) = q_s^{-1} max_k log|g_k(z)|, optionally clamped at 0."""
    if all(abs(complex(c)) == 0 for c in z):
        return 0.0 if clamp_plus else NEG_INF
    comps = eval_components(map_, z)
    v = max(c.log_modulus for c in comps) / map_.q_s
    return max(v, 0.0) if clamp_plus else v


def eval_vs_many(
    map_: HomogeneousMap, points: np.ndarray, clamp_plus: bool = False
) -> np.ndarray:
    """Vectorized v_s over points of shape (count, n)."""
    pts = np.asarray(points, dtype=np.complex128)
    sys_ = map_.system
    count = pts.shape[0]
    out = np.empty(count)
    if map_.s * sys_.q > PHASE_EXACT_LIMIT:
        for i in range(count):
            out[i] = eval_vs(map_, pts[i], clamp_plus)
        return out
    with np.errstate(divide="ignore"):
        X = np.log(np.abs(pts))
    irregular = np.isneginf(X).any(axis=1)
    A = np.angle(pts)
    K = np.array([mono.k_vec for mono in sys_.monomials], dtype=np.float64)
    C = np.array([float(mono.log_coef) for mono in sys_.monomials])
    regular = ~irregular
    if regular.any():
        L = map_.s * (X[regular] @ K.T + C)
        P = map_.s * (A[regular] @ K.T)
        P = np.remainder(P + math.pi, TWO_PI) - math.pi
        logs, _ = _kernels.esym_log_complex_batch(L, np.cos(P), np.sin(P), sys_.n)
        nfact = math.factorial(sys_.n)
        scales = np.array([nfact // k for k in range(1, sys_.n + 1)], dtype=np.float64)
        vs = (logs * scales).max(axis=1) / map_.q_s
        out[regular] = vs
    for i in np.nonzero(irregular)[0]:
        out[i] = eval_vs(map_, pts[i], clamp_plus=False)
    if clamp_plus:
        np.maximum(out, 0.0, out=out)
    return out


# ---------------------------------------------------------------------------
# Exact symbolic expansion oracle (small cases only)


@dataclass(frozen=True)
class SymbolicExpansion:
    """Per component: (exponent vector, coefficient) terms.

    A coefficient is a tuple of (log-magnitude rational, positive integer
    multiplier) pairs: the exact value is sum_i M_i * exp(R_i).  Monomial
    coefficients here are positive reals, so no sign or phase data is
    needed beyond that.
    """

    components: tuple
    q_s: int


def _poly_mul(p1: dict, p2: dict, cap: int) -> dict:
    out: dict = {}
    for e1, c1 in p1.items():
        for e2, c2 in p2.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            slot = out.setdefault(e, {})
            for r1, m1 in c1.items():
                for r2, m2 in c2.items():
                    r = r1 + r2
                    slot[r] = slot.get(r, 0) + m1 * m2
            if len(out) > cap:
                raise ExpansionCapError(
                    f"symbolic expansion exceeded the {cap}-term cap; "
                    "test without the expansion oracle"
                )
    return out


def expand_symbolic(map_: HomogeneousMap, term_cap: int = 100_000) -> SymbolicExpansion:
    """Exact multinomial expansion of every component; guarded by a term cap."""
    sys_ = map_.system
    if sys_.n > 3:
        raise InputError("symbolic expansion is supported for n <= 3 only")
    s = map_.s
    base = [
        (tuple(s * k for k in mono.k_vec), s * mono.log_coef)
        for mono in sys_.monomials
    ]
    nfact = math.factorial(sys_.n)
    components = []
    for k in range(1, sys_.n + 1):
        ek: dict = {}
        for idx in combinations(range(sys_.m), k):
            e = tuple(sum(base[j][0][c] for j in idx) for c in range(sys_.n))
            r = sum((base[j][1] for j in idx), Fraction(0))
            slot = ek.setdefault(e, {})
            slot[r] = slot.get(r, 0) + 1
            if len(ek) > term_cap:
                raise ExpansionCapError(
                    f"symbolic expansion exceeded the {term_cap}-term cap"
                )
        power = nfact // k
        result = ek
        for _ in range(power - 1):
            result = _poly_mul(result, ek, term_cap)
        comp = tuple(
            (e, tuple(sorted(coeffs.items())))
            for e, coeffs in sorted(result.items())
        )
        components.append(comp)
    return SymbolicExpansion(tuple(components), map_.q_s)


def _complex_logsum(terms: list[tuple[float, complex]]) -> ComplexLogValue:
    """Stable sum of exp(logmod) * unit terms, in log-polar form."""
    finite = [(lm, u) for lm, u in terms if lm > NEG_INF]
    if not finite:
        return ComplexLogValue(NEG_INF, 0.0)
    m_best = max(lm for lm, _ in finite)
    re = im = 0.0
    for lm, u in finite:
        w = math.exp(lm - m_best)
        re += w * u.real
        im += w * u.imag
    mag = math.hypot(re, im)
    if mag == 0.0:
        return ComplexLogValue(NEG_INF, 0.0)
    return ComplexLogValue(m_best + math.log(mag), math.atan2(im, re))


def evaluate_expansion_component(
    expansion: SymbolicExpansion, k: int, z: Sequence[complex]
) -> ComplexLogValue:
    """Evaluate one expanded component at z, again in log-polar form."""
    comp = expansion.components[k - 1]
    x = []
    units = []
    for c in z:
        c = complex(c)
        m = abs(c)
        x.append(math.log(m) if m > 0 else NEG_INF)
        units.append(c / m if m > 0 else complex(1.0, 0.0))
    terms = []
    for e, coeffs in comp:
        acc = 0.0
        dead = False
        u = complex(1.0, 0.0)
        for ek, xk, uk in zip(e, x, units):
            if ek:
                if xk == NEG_INF:
                    dead = True
                    break
                acc += ek * xk
                u *= _unit_pow(uk, ek)
        if dead:
            continue
        coef_logs = [float(r) + math.log(m) for r, m in coeffs]
        cmax = max(coef_logs)
        coef_log = cmax + math.log(sum(math.exp(v - cmax) for v in coef_logs))
        terms.append((coef_log + acc, u))
    return _complex_logsum(terms)
