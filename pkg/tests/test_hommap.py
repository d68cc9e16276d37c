import math
from fractions import Fraction

import numpy as np
import pytest

from greenlem import (
    InputError,
    build_map,
    emit_monomials,
    eval_component,
    eval_components,
    eval_v,
    eval_vs,
    eval_vs_many,
    exact_pieces_polyhedral,
    expand_symbolic,
    rationalize,
)
from greenlem.errors import ExpansionCapError
from greenlem.hommap import evaluate_expansion_component
from greenlem.pieces import Monomial, MonomialSystem


def _polydisk_system():
    return MonomialSystem(
        (Monomial((1, 0), Fraction(0)), Monomial((0, 1), Fraction(0))),
        N=1,
        r=Fraction(1),
        q=1,
        n=2,
    )


def _example_system(example_polyhedron):
    return emit_monomials(rationalize(exact_pieces_polyhedral(example_polyhedron)))


def test_build_map_degrees():
    system = _polydisk_system()
    assert build_map(system, 3).q_s == 6
    assert build_map(system, 1).q_s == 2 * system.q  # n! = 2


def test_build_map_example_degree(example_polyhedron):
    system = _example_system(example_polyhedron)
    assert build_map(system, 2).q_s == 8


def test_build_map_guards(example_polyhedron):
    system = _polydisk_system()
    with pytest.raises(InputError):
        build_map(system, 0)
    thin = MonomialSystem((Monomial((1, 0), Fraction(0)),), N=1, r=Fraction(1), q=1, n=2)
    with pytest.raises(InputError):
        build_map(thin, 1)


def test_expand_polydisk_s1():
    exp = expand_symbolic(build_map(_polydisk_system(), 1))
    # component 1: z1^2 + 2 z1 z2 + z2^2; component 2: z1 z2
    comp1 = {e: coeffs for e, coeffs in exp.components[0]}
    assert comp1[(2, 0)] == ((Fraction(0), 1),)
    assert comp1[(1, 1)] == ((Fraction(0), 2),)
    assert comp1[(0, 2)] == ((Fraction(0), 1),)
    comp2 = {e: coeffs for e, coeffs in exp.components[1]}
    assert comp2 == {(1, 1): ((Fraction(0), 1),)}


def test_expand_polydisk_s3():
    exp = expand_symbolic(build_map(_polydisk_system(), 3))
    comp1 = {e for e, _ in exp.components[0]}
    assert comp1 == {(6, 0), (3, 3), (0, 6)}
    assert exp.components[1] == (((3, 3), ((Fraction(0), 1),)),)


def test_expand_example_pair_products(example_polyhedron):
    exp = expand_symbolic(build_map(_example_system(example_polyhedron), 2))
    # Component 2 is the plain sum of the three pair products (n!/2 = 1),
    # each of degree 8.
    assert len(exp.components[1]) == 3
    for e, _ in exp.components[1]:
        assert sum(e) == 8


def test_expansion_degrees(example_polyhedron):
    for map_ in (
        build_map(_polydisk_system(), 2),
        build_map(_example_system(example_polyhedron), 1),
    ):
        exp = expand_symbolic(map_)
        for comp in exp.components:
            for e, _ in comp:
                assert sum(e) == map_.q_s


def test_expand_cap(example_polyhedron):
    system = _example_system(example_polyhedron)
    with pytest.raises(ExpansionCapError):
        expand_symbolic(build_map(system, 1), term_cap=4)


def test_eval_component_polydisk():
    map_ = build_map(_polydisk_system(), 1)
    val = eval_component(map_, 1, (1.0, 1.0))
    assert val.log_modulus == pytest.approx(2 * math.log(2), abs=1e-12)
    assert eval_component(map_, 1, (1.0, -1.0)).log_modulus == -math.inf
    val2 = eval_component(map_, 2, (1.0, -1.0))
    assert val2.log_modulus == 0.0


def test_exact_cancellation_odd_s():
    for s in (1, 3, 5):
        map_ = build_map(_polydisk_system(), s)
        assert eval_component(map_, 1, (1.0, -1.0)).log_modulus == -math.inf
        assert eval_vs(map_, (1.0, -1.0)) == 0.0  # component 2 rescues


def test_eval_vs_examples():
    map10 = build_map(_polydisk_system(), 10)
    assert eval_vs(map10, (1.0, 1.0)) == pytest.approx(math.log(2) / 10, abs=1e-12)
    assert eval_vs(map10, (0.0, 0.0)) == -math.inf
    assert eval_vs(map10, (0.0, 0.0), clamp_plus=True) == 0.0


def test_eval_vs_homogeneous(example_polyhedron):
    rng = np.random.default_rng(0)
    for map_ in (
        build_map(_polydisk_system(), 5),
        build_map(_example_system(example_polyhedron), 3),
    ):
        for _ in range(300):
            z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            c = complex(rng.standard_normal(), rng.standard_normal())
            if abs(c) < 1e-3 or min(abs(z)) < 1e-6:
                continue
            lhs = eval_vs(map_, c * z)
            rhs = eval_vs(map_, z) + math.log(abs(c))
            assert abs(lhs - rhs) < 1e-9


def test_upper_envelope_bound(example_polyhedron):
    rng = np.random.default_rng(1)
    for system, s in [
        (_polydisk_system(), 1),
        (_polydisk_system(), 4),
        (_example_system(example_polyhedron), 2),
    ]:
        map_ = build_map(system, s)
        bound = max(
            math.log(math.comb(system.m, k)) / (k * s * system.q)
            for k in range(1, system.n + 1)
        )
        for _ in range(300):
            z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            assert eval_vs(map_, z) <= eval_v(system, z).value + bound + 1e-12
    # Equality for the polydisk at z = (1, 1).
    map_ = build_map(_polydisk_system(), 4)
    assert eval_vs(map_, (1.0, 1.0)) == pytest.approx(
        eval_v(_polydisk_system(), (1.0, 1.0)).value + math.log(2) / 4, abs=1e-12
    )


def test_component_matches_expansion(example_polyhedron):
    rng = np.random.default_rng(2)
    cases = [(build_map(_polydisk_system(), s), None) for s in (1, 2, 3)]
    cases.append((build_map(_example_system(example_polyhedron), 1), None))
    for map_, _ in cases:
        exp = expand_symbolic(map_)
        for _ in range(200):
            z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            for k in (1, 2):
                direct = eval_component(map_, k, z)
                via_exp = evaluate_expansion_component(exp, k, z)
                if direct.log_modulus == -math.inf:
                    assert via_exp.log_modulus == -math.inf
                    continue
                denom = max(1.0, abs(direct.log_modulus))
                assert abs(direct.log_modulus - via_exp.log_modulus) / denom < 1e-9


def test_joint_minus_inf_detection():
    for s in (1, 3):
        map_ = build_map(_polydisk_system(), s)
        exp = expand_symbolic(map_)
        assert eval_component(map_, 1, (1.0, -1.0)).log_modulus == -math.inf
        assert evaluate_expansion_component(exp, 1, (1.0, -1.0)).log_modulus == -math.inf


def test_phase_consistency_single_subset_component():
    # Component n is a single subset product, so doubling s doubles its
    # log-modulus exactly (up to float noise).
    rng = np.random.default_rng(3)
    m1 = build_map(_polydisk_system(), 3)
    m2 = build_map(_polydisk_system(), 6)
    for _ in range(100):
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        a = eval_component(m1, 2, z).log_modulus
        b = eval_component(m2, 2, z).log_modulus
        assert b == pytest.approx(2 * a, rel=1e-12, abs=1e-12)


def test_batch_matches_scalar(example_polyhedron):
    rng = np.random.default_rng(4)
    map_ = build_map(_example_system(example_polyhedron), 3)
    pts = rng.standard_normal((100, 2)) + 1j * rng.standard_normal((100, 2))
    pts[0] = (0.0, 0.5)  # exercise the irregular path
    batch = eval_vs_many(map_, pts)
    for i in range(100):
        assert batch[i] == pytest.approx(eval_vs(map_, pts[i]), abs=1e-12)


def test_kernel_backends_agree():
    from greenlem import _esym_py

    rng = np.random.default_rng(5)
    for m, kmax in [(6, 2), (10, 3), (13, 4)]:
        L = rng.uniform(-5, 5, m)
        L[0] = -math.inf
        P = rng.uniform(-math.pi, math.pi, m)
        UR, UI = np.cos(P), np.sin(P)
        ref_log, ref_phase = _esym_py.esym_log_complex(L, UR, UI, kmax)
        from greenlem import _kernels

        got_log, got_phase = _kernels.esym_log_complex(L, UR, UI, kmax)
        np.testing.assert_allclose(got_log, ref_log, rtol=1e-13, atol=1e-13)
        np.testing.assert_allclose(got_phase, ref_phase, rtol=1e-13, atol=1e-13)
