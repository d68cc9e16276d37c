import math

import numpy as np
import pytest

from greenlem import (
    check_closed_form,
    eval_green,
    green_grid_oracle,
    green_plus,
)
from greenlem.green import LogPoint


def test_green_polydisk(unit_polydisk):
    gv = eval_green(unit_polydisk, (0.5, 0.5))
    assert gv.value == pytest.approx(math.log(0.5), abs=1e-12)


def test_green_ball_boundary_theta(unit_ball):
    gv = eval_green(unit_ball, (0.6, 0.8))
    assert gv.value == pytest.approx(0.0, abs=1e-12)
    assert gv.attained_theta == pytest.approx((0.36, 0.64), abs=1e-12)
    # Reported theta reproduces the value through the sup representation.
    from greenlem import support_h

    theta = gv.attained_theta
    s = sum(t * math.log(m) for t, m in zip(theta, (0.6, 0.8)))
    assert s - support_h(unit_ball, theta) == pytest.approx(gv.value, abs=1e-9)


def test_green_example_polyhedron(example_polyhedron):
    gv = eval_green(example_polyhedron, (0.8, 0.5))
    assert gv.value == pytest.approx(0.5 * math.log(0.8), abs=1e-12)
    assert gv.attained_theta == (0.5, 0.5)


def test_green_at_zero(unit_ball):
    gv = eval_green(unit_ball, (0.0, 0.0))
    assert gv.value == -math.inf
    assert gv.attained_theta is None


def test_green_handles_one_zero_coordinate(unit_polydisk):
    gv = eval_green(unit_polydisk, (0.0, 0.5))
    assert gv.value == pytest.approx(math.log(0.5), abs=1e-12)


def test_grid_oracle_polydisk_exact(unit_polydisk):
    for d in (1, 3, 7):
        assert green_grid_oracle(unit_polydisk, (0.5, 0.5), d) == pytest.approx(
            math.log(0.5), abs=1e-14
        )


def test_grid_oracle_ball(unit_ball):
    val = green_grid_oracle(unit_ball, (0.6, 0.8), 64)
    assert abs(val) < 2e-3


def test_grid_oracle_example_even_resolution(example_polyhedron):
    # The maximizer (1/2, 1/2) is a grid point for every even resolution.
    closed = eval_green(example_polyhedron, (0.8, 0.5)).value
    for d in (2, 8, 64):
        assert green_grid_oracle(example_polyhedron, (0.8, 0.5), d) == pytest.approx(
            closed, abs=1e-14
        )


def test_green_plus(unit_polydisk, unit_ball):
    assert green_plus(unit_polydisk, (2.0, 0.1)) == pytest.approx(math.log(2), abs=1e-12)
    assert green_plus(unit_ball, (3.0, 4.0)) == pytest.approx(math.log(5), abs=1e-12)
    assert green_plus(unit_ball, (0.0, 0.0)) == 0.0
    # Boundary points give zero within tolerance.
    assert green_plus(unit_ball, (0.6, 0.8)) < 1e-6


def test_homogeneity(unit_polydisk, unit_ball, example_polyhedron):
    rng = np.random.default_rng(2)
    for domain in (unit_polydisk, unit_ball, example_polyhedron):
        for _ in range(300):
            z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            c = complex(rng.standard_normal(), rng.standard_normal())
            if abs(c) < 1e-3 or min(abs(z)) < 1e-6:
                continue
            lhs = eval_green(domain, c * z).value
            rhs = eval_green(domain, z).value + math.log(abs(c))
            assert abs(lhs - rhs) < 1e-9


def test_sign_pattern(unit_ball, example_polyhedron):
    rng = np.random.default_rng(3)
    for domain in (unit_ball, example_polyhedron):
        for _ in range(200):
            w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            g = eval_green(domain, w).value
            boundary = math.exp(-g) * w
            assert abs(eval_green(domain, boundary).value) < 1e-6
            assert eval_green(domain, 0.5 * boundary).value < 0
            assert eval_green(domain, 2.0 * boundary).value > 0


def test_log_convexity(unit_ball, example_polyhedron):
    rng = np.random.default_rng(4)
    for domain in (unit_ball, example_polyhedron):
        for _ in range(200):
            x1 = tuple(rng.uniform(-3, 1, 2))
            x2 = tuple(rng.uniform(-3, 1, 2))
            mid = tuple((a + b) / 2 for a, b in zip(x1, x2))
            g1 = eval_green(domain, LogPoint(x1)).value
            g2 = eval_green(domain, LogPoint(x2)).value
            gm = eval_green(domain, LogPoint(mid)).value
            assert gm <= (g1 + g2) / 2 + 1e-9


def test_oracle_below_green_and_refines(unit_ball):
    rng = np.random.default_rng(5)
    pts = [tuple(rng.uniform(-2, 0.5, 2)) for _ in range(50)]
    prev_worst = None
    for d in (8, 16, 32, 64):
        worst = 0.0
        for x in pts:
            closed = eval_green(unit_ball, LogPoint(x)).value
            oracle = green_grid_oracle(unit_ball, LogPoint(x), d)
            assert oracle <= closed + 1e-12
            worst = max(worst, closed - oracle)
        if prev_worst is not None:
            assert worst <= prev_worst + 1e-15
        prev_worst = worst


def test_pole_normalization_bounded(unit_ball, example_polyhedron):
    rng = np.random.default_rng(6)
    for domain in (unit_ball, example_polyhedron):
        worst = 0.0
        for _ in range(300):
            w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            w = w / max(abs(w))
            g = eval_green(domain, w).value
            worst = max(worst, abs(g))  # log ||z||_inf = 0 on this sphere
        assert math.isfinite(worst)
        assert worst < 10.0


def test_closed_form_check(unit_polydisk, example_polyhedron):
    for domain in (unit_polydisk, example_polyhedron):
        check = check_closed_form(domain, count=1000, resolution=64, seed=0)
        assert check.ok
        assert check.oracle_excess <= 1e-12
