import math

import numpy as np
import pytest

from greenlem import (
    ConvergenceCapError,
    build_map,
    build_sandwich,
    emit_monomials,
    eval_green,
    eval_v,
    eval_vs,
    exact_pieces_polyhedral,
    find_s0,
    green_plus,
    rationalize,
    sample_level_set,
    sup_error,
    verify_certificate,
    zero_locus_margin,
)
from greenlem.verify import boundary_sample, sphere_sample


def _system(domain):
    return emit_monomials(rationalize(exact_pieces_polyhedral(domain)))


def test_level_set_polydisk_diagonal(unit_polydisk):
    system = _system(unit_polydisk)
    v = lambda z: eval_v(system, z).value
    samples = sample_level_set(v, 2, -1.0, 0, seed=0, extra_directions=[(1.0, 1.0)])
    z = samples.points[0]
    assert z == pytest.approx((math.exp(-1), math.exp(-1)), abs=1e-15)


def test_level_set_membership(unit_polydisk):
    system = _system(unit_polydisk)
    v = lambda z: eval_v(system, z).value
    samples = sample_level_set(v, 2, -1.0, 200, seed=1)
    for z in samples.points:
        assert v(z) == pytest.approx(-1.0, abs=1e-12)


def test_level_set_ball_green_radius(unit_ball):
    g = lambda z: eval_green(unit_ball, z).value
    samples = sample_level_set(g, 2, 0.0, 100, seed=2)
    for z in samples.points:
        assert np.linalg.norm(z) == pytest.approx(1.0, abs=1e-12)


def test_sup_error_zero_for_equal_functions(unit_polydisk):
    system = _system(unit_polydisk)
    v = lambda z: eval_v(system, z).value
    samples = sample_level_set(v, 2, -1.0, 50, seed=3)
    stat = sup_error(v, v, samples)
    assert stat.sup_error == 0.0
    assert stat.mean_error == 0.0
    assert stat.count == 50


def test_sup_error_polydisk_vs_map(unit_polydisk):
    system = _system(unit_polydisk)
    map_ = build_map(system, 10)
    v = lambda z: eval_v(system, z).value
    samples = sample_level_set(v, 2, -1.0, 300, seed=4, extra_directions=[(1.0, 1.0)])
    stat = sup_error(
        lambda z: eval_vs(map_, z), lambda z: eval_green(unit_polydisk, z).value, samples
    )
    assert stat.sup_error == pytest.approx(math.log(2) / 10, abs=1e-12)


def test_sup_error_rounding_only(example_polyhedron):
    system = _system(example_polyhedron)
    v = lambda z: eval_v(system, z).value
    # Include a direction where the rounded mixed piece is the active one.
    samples = sample_level_set(v, 2, -1.0, 300, seed=5, extra_directions=[(0.8, 0.5)])
    stat = sup_error(v, lambda z: eval_green(example_polyhedron, z).value, samples)
    from fractions import Fraction

    gap = (math.log(2) - float(Fraction(34657, 50000))) / 2
    assert stat.sup_error == pytest.approx(gap, abs=1e-12)


def test_find_s0_polydisk(unit_polydisk):
    system = _system(unit_polydisk)
    res = find_s0(
        system,
        unit_polydisk,
        0.1,
        seed=6,
        extra_directions=[(1.0, 1.0)],
    )
    assert res.s == 8
    errors = {s: stat.sup_error for s, stat in res.table}
    assert errors[4] == pytest.approx(math.log(2) / 4, abs=1e-9)
    assert errors[8] == pytest.approx(math.log(2) / 8, abs=1e-9)


def test_find_s0_trivial_epsilon(unit_polydisk):
    system = _system(unit_polydisk)
    assert find_s0(system, unit_polydisk, 2.0, seed=7).s == 1


def test_find_s0_cap(unit_polydisk):
    system = _system(unit_polydisk)
    with pytest.raises(ConvergenceCapError):
        find_s0(
            system,
            unit_polydisk,
            1e-9,
            s_cap=4,
            seed=8,
            extra_directions=[(1.0, 1.0)],
        )


def test_error_is_level_independent(example_polyhedron):
    # |G - v_s| at radially projected points is the same at t=-1 and t=-2.
    system = _system(example_polyhedron)
    map_ = build_map(system, 4)
    v = lambda z: eval_v(system, z).value
    f = lambda z: eval_vs(map_, z)
    g = lambda z: eval_green(example_polyhedron, z).value
    s1 = sample_level_set(v, 2, -1.0, 200, seed=9)
    s2 = sample_level_set(v, 2, -2.0, 200, seed=9)
    stat1 = sup_error(f, g, s1)
    stat2 = sup_error(f, g, s2)
    assert stat1.sup_error == pytest.approx(stat2.sup_error, abs=1e-10)


def test_zero_locus_margin_polydisk(unit_polydisk):
    system = _system(unit_polydisk)
    map_ = build_map(system, 7)
    # Hand candidate at the rescued direction (1,-1)/sqrt(2) for odd s:
    # component 1 cancels exactly, component 2 gives |z1 z2|^(1/2) = 2^(-1/2).
    z = np.array([1.0, -1.0]) / math.sqrt(2)
    assert eval_vs(map_, z) == pytest.approx(math.log(2 ** -0.5), abs=1e-12)
    margin = zero_locus_margin(map_, 2000, seed=10)
    # Dense pre-scan oracle over moduli directions and relative phases: the
    # sphere minimum sits in a narrow band at or just below 2^(-1/2).
    assert 0.5 < margin <= 2 ** -0.5 + 1e-9
    grid = [
        (math.cos(a), math.sin(a) * complex(math.cos(p), math.sin(p)))
        for a in np.linspace(0.01, math.pi / 2 - 0.01, 100)
        for p in np.linspace(0.0, math.pi, 40)
    ]
    oracle = min(math.exp(eval_vs(map_, np.array(w))) for w in grid)
    assert 0.5 < oracle <= 2 ** -0.5 + 1e-9
    # Two independent estimates of the same sphere minimum.
    assert abs(margin - oracle) < 0.01


def test_zero_locus_scale_invariance(unit_polydisk):
    system = _system(unit_polydisk)
    map_ = build_map(system, 4)
    s1 = sphere_sample(2, 500, 11)
    vs1 = min(eval_vs(map_, z) for z in s1.points)
    vs2 = min(eval_vs(map_, 2.0 * z) for z in s1.points)
    assert vs2 - vs1 == pytest.approx(math.log(2), abs=1e-9)


def test_sandwich_polydisk(unit_polydisk):
    system = _system(unit_polydisk)
    res = find_s0(system, unit_polydisk, 0.5 * math.log1p(0.25) * 0.9, seed=12)
    cert = build_sandwich(res.map, unit_polydisk, 0.25, 2000, 2000, seed=13)
    assert cert.passed
    assert cert.delta == 0.5 * math.log1p(0.25)
    assert cert.scale_log == -cert.delta * cert.q_s
    # The exact sup of v_s on the boundary is log2/s (at phase-aligned equal
    # moduli), so -(delta - log2/s) bounds the inner margin from above and a
    # finite sample lands close beneath it.
    theory = -(cert.delta - math.log(2) / cert.s)
    assert cert.inner_margin <= theory + 1e-12
    assert cert.inner_margin == pytest.approx(theory, abs=2e-2)
    assert cert.outer_margin >= 0


def test_sandwich_fails_for_small_s(unit_polydisk):
    system = _system(unit_polydisk)
    map_ = build_map(system, 1)  # error log 2 > delta
    cert = build_sandwich(map_, unit_polydisk, 0.25, 500, 500, seed=14)
    assert not cert.passed
    assert cert.inner_margin >= 0
    assert cert.counterexample is not None
    z = np.array(cert.counterexample)
    assert eval_vs(map_, z) - cert.delta >= 0
    from greenlem import contains

    assert contains(unit_polydisk, np.abs(z)).location == "boundary"


def test_verify_certificate_roundtrip(unit_polydisk):
    system = _system(unit_polydisk)
    res = find_s0(system, unit_polydisk, 0.1, seed=15)
    cert = build_sandwich(res.map, unit_polydisk, 0.25, 1000, 1000, seed=16)
    out = verify_certificate(cert, res.map, unit_polydisk, seed=17)
    assert out.ok
    # Tampering with delta refutes immediately.
    import dataclasses

    bad = dataclasses.replace(cert, delta=cert.delta + 1e-9)
    assert not verify_certificate(bad, res.map, unit_polydisk, seed=18).ok


def test_clamped_convergence_surrogate(unit_polydisk):
    # sup over spheres of |v_s+ - G+| <= sup over the level set of |v_s - G|,
    # checked on shared directions so the comparison is deterministic.
    system = _system(unit_polydisk)
    map_ = build_map(system, 8)
    v = lambda z: eval_v(system, z).value
    dirs = sphere_sample(2, 300, 19).points
    level = sample_level_set(v, 2, -1.0, 0, seed=20, extra_directions=list(dirs))
    sup_level = max(
        abs(eval_vs(map_, z) - eval_green(unit_polydisk, z).value) for z in level.points
    )
    for radius in (0.5, 1.0, 2.0):
        for w in dirs:
            z = radius * w
            diff = abs(
                eval_vs(map_, z, clamp_plus=True) - green_plus(unit_polydisk, z)
            )
            assert diff <= sup_level + 1e-9


def test_boundary_sample_kinds(unit_ball):
    b = boundary_sample(unit_ball, 50, seed=21)
    assert b.kind == "boundary"
    for z in b.points:
        assert eval_green(unit_ball, z).value == pytest.approx(0.0, abs=1e-12)
    d = boundary_sample(unit_ball, 50, seed=22, dilation=1.25)
    assert d.kind == "dilated_boundary"
    for z in d.points:
        assert eval_green(unit_ball, z).value == pytest.approx(
            math.log(1.25), abs=1e-12
        )
