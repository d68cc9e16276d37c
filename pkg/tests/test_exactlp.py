from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from greenlem.exactlp import (
    LPError,
    cone_membership,
    linear_program,
    solve_lp_exact,
    solve_lp_float,
)

scipy_opt = pytest.importorskip("scipy.optimize")


def test_binding_first_constraint():
    lp = linear_program([1, 0], [[1, 0], [0, 1], [1, 1]], [0, 0, Fraction(-7, 10)])
    res = solve_lp_exact(lp)
    assert res.status == "optimal"
    assert res.value == 0


def test_sum_objective():
    lp = linear_program([1, 1], [[1, 0], [0, 1], [1, 1]], [0, 0, Fraction(-7, 10)])
    res = solve_lp_exact(lp)
    assert res.status == "optimal"
    assert res.value == Fraction(-7, 10)


def test_unbounded_with_certifying_ray():
    # max x2 s.t. x1 <= 0, x1 + x2 <= 0: letting x1 -> -inf frees x2.
    lp = linear_program([0, 1], [[1, 0], [1, 1]], [0, 0])
    res = solve_lp_exact(lp)
    assert res.status == "unbounded"
    ray = res.ray
    # The ray certifies: A @ ray <= 0 and objective . ray > 0.
    for row in lp.constraint_matrix:
        assert sum(a * d for a, d in zip(row, ray)) <= 0
    assert sum(c * d for c, d in zip(lp.objective, ray)) > 0


def test_float_matches_exact_on_binding_example():
    lp = linear_program([1, 0], [[1, 0], [0, 1], [1, 1]], [0, 0, Fraction(-7, 10)])
    res = solve_lp_float(lp)
    assert res.status == "optimal"
    assert abs(res.value) < 1e-12


def test_float_infeasible():
    lp = linear_program([1], [[1], [-1]], [-1, 0])
    assert solve_lp_float(lp).status == "infeasible"
    assert solve_lp_exact(lp).status == "infeasible"


def test_malformed_dimensions():
    with pytest.raises(LPError):
        linear_program([1, 0], [[1]], [0])
    with pytest.raises(LPError):
        linear_program([], [], [])


def test_cone_membership_examples():
    assert cone_membership([(1, 0), (0, 1), (1, 1)], (1, 0))
    # (0,1) = (1,1) - (1,0) needs a negative weight, so it is outside the cone.
    assert not cone_membership([(1, 0), (1, 1)], (0, 1))
    assert cone_membership([(2, 1)], (2, 1))


def test_cone_membership_dimension_error():
    with pytest.raises(LPError):
        cone_membership([(1, 0, 0)], (1, 0))


def test_bland_terminates_on_degenerate_instance():
    # Beale's classic cycling instance (degenerate under naive pivoting).
    lp = linear_program(
        [Fraction(3, 4), -150, Fraction(1, 50), -6],
        [
            [Fraction(1, 4), -60, Fraction(-1, 25), 9],
            [Fraction(1, 2), -90, Fraction(-1, 50), 3],
            [0, 0, 1, 0],
            [-1, 0, 0, 0],
            [0, -1, 0, 0],
            [0, 0, -1, 0],
            [0, 0, 0, -1],
        ],
        [0, 0, 1, 0, 0, 0, 0],
    )
    res = solve_lp_exact(lp)
    assert res.status == "optimal"
    assert res.value == Fraction(1, 20)


def _lp_strategy():
    entry = st.integers(-5, 5).map(Fraction)
    n = st.shared(st.integers(1, 4), key="nvars")
    rows = st.integers(0, 6)
    return st.tuples(n, rows).flatmap(
        lambda dims: st.tuples(
            st.lists(entry, min_size=dims[0], max_size=dims[0]),
            st.lists(
                st.lists(entry, min_size=dims[0], max_size=dims[0]),
                min_size=dims[1],
                max_size=dims[1],
            ),
            st.lists(entry, min_size=dims[1], max_size=dims[1]),
        )
    )


@settings(max_examples=60, deadline=None)
@given(_lp_strategy())
def test_exact_resubstitution(data):
    c, rows, rhs = data
    lp = linear_program(c, rows, rhs)
    res = solve_lp_exact(lp)
    if res.status == "optimal":
        # The optimizer is feasible and reproduces the value, all exactly.
        for row, b in zip(rows, rhs):
            assert sum(a * x for a, x in zip(row, res.optimizer)) <= b
        assert sum(ci * x for ci, x in zip(c, res.optimizer)) == res.value


@settings(max_examples=60, deadline=None)
@given(_lp_strategy())
def test_float_agrees_with_exact(data):
    c, rows, rhs = data
    lp = linear_program(c, rows, rhs)
    exact = solve_lp_exact(lp)
    approx = solve_lp_float(lp)
    if approx.flagged:
        return  # flagged results are allowed to defer to the exact solver
    assert approx.status == exact.status
    if exact.status == "optimal":
        assert abs(float(exact.value) - approx.value) < 1e-9


@settings(max_examples=60, deadline=None)
@given(_lp_strategy())
def test_agrees_with_scipy(data):
    c, rows, rhs = data
    lp = linear_program(c, rows, rhs)
    res = solve_lp_exact(lp)
    sci = scipy_opt.linprog(
        c=[-float(ci) for ci in c],
        A_ub=[[float(a) for a in row] for row in rows] or None,
        b_ub=[float(b) for b in rhs] or None,
        bounds=[(None, None)] * len(c),
        method="highs",
    )
    status_map = {0: "optimal", 2: "infeasible", 3: "unbounded"}
    expected = status_map.get(sci.status)
    if expected is None:
        return
    assert res.status == expected
    if expected == "optimal":
        assert abs(float(res.value) + sci.fun) < 1e-7


@settings(max_examples=40, deadline=None)
@given(_lp_strategy())
def test_strong_duality(data):
    c, rows, rhs = data
    if not rows:
        return
    lp = linear_program(c, rows, rhs)
    primal = solve_lp_exact(lp)
    if primal.status != "optimal":
        return
    # Dual: min b.y s.t. A^T y = c, y >= 0, solved as max -b.y over
    # inequality pairs; strong duality makes the optima equal exactly.
    n, m = len(c), len(rows)
    dual_rows = []
    dual_rhs = []
    for k in range(n):
        col = [rows[i][k] for i in range(m)]
        dual_rows.append(col)
        dual_rhs.append(c[k])
        dual_rows.append([-a for a in col])
        dual_rhs.append(-c[k])
    for i in range(m):
        dual_rows.append([Fraction(-1) if j == i else Fraction(0) for j in range(m)])
        dual_rhs.append(Fraction(0))
    dual = solve_lp_exact(linear_program([-b for b in rhs], dual_rows, dual_rhs))
    assert dual.status == "optimal"
    assert -dual.value == primal.value
