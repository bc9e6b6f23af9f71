"""LP kernel: certificates checked here with arithmetic independent of the
solver's own verification."""

from fractions import Fraction as F

import pytest

from tvlab.errors import InputError
from tvlab.linprog import RationalMatrix, rank, rat, solve_feasibility
from tvlab.rng import SeededGenerator


def check_feasible(A, b, x):
    assert all(v >= 0 for v in x)
    for i in range(A.rows):
        assert sum(A[i, j] * x[j] for j in range(A.cols)) == b[i]


def check_farkas(A, b, y):
    for j in range(A.cols):
        assert sum(y[i] * A[i, j] for i in range(A.rows)) <= 0
    assert sum(y[i] * b[i] for i in range(A.rows)) > 0


def test_identity_case():
    r = solve_feasibility(RationalMatrix.from_rows([[1]]), [1])
    assert r.feasible and r.x == (F(1),)


def test_negative_rhs_is_infeasible_with_exact_certificate():
    r = solve_feasibility(RationalMatrix.from_rows([[1, 1]]), [-1])
    assert not r.feasible
    assert r.farkas == (F(-1),)
    check_farkas(RationalMatrix.from_rows([[1, 1]]), [F(-1)], r.farkas)


def test_lifted_three_point_instance():
    # columns are the flattened tensor lifts of 0, 2 (class 0) and 1
    # (class 1) on the line, plus the convexity row; solved by hand
    A = RationalMatrix.from_rows([
        [0, 1, F(-1, 2)],
        [0, -1, F(1, 2)],
        [F(1, 2), F(1, 2), F(-1, 2)],
        [F(-1, 2), F(-1, 2), F(1, 2)],
        [1, 1, 1],
    ])
    r = solve_feasibility(A, [0, 0, 0, 0, 1])
    assert r.feasible
    assert r.x == (F(1, 4), F(1, 4), F(1, 2))


def test_zero_rows_feasible_at_origin():
    r = solve_feasibility(RationalMatrix.zeros(0, 3), [])
    assert r.feasible and r.x == (F(0), F(0), F(0))


def test_no_columns():
    assert solve_feasibility(RationalMatrix.zeros(2, 0), [0, 0]).feasible
    r = solve_feasibility(RationalMatrix.zeros(2, 0), [1, 0])
    assert not r.feasible
    check_farkas(RationalMatrix.zeros(2, 0), [F(1), F(0)], r.farkas)


def test_dimension_mismatch():
    with pytest.raises(InputError):
        solve_feasibility(RationalMatrix.from_rows([[1, 2]]), [1, 2])


def test_rank_examples():
    assert rank(RationalMatrix.identity(3)) == 3
    assert rank(RationalMatrix.zeros(2, 4)) == 0
    assert rank(RationalMatrix.from_rows([[1, 2], [2, 4], [3, 6]])) == 1
    assert rank(RationalMatrix.from_rows([[F(1, 3), 0], [0, F(2, 7)]])) == 2


def test_rat_parsing_round_trip():
    assert rat("3/4") == F(3, 4)
    assert rat("-5") == F(-5)
    with pytest.raises(InputError):
        rat(0.5)


def _random_instance(rng, max_rows=6, max_cols=8):
    m = rng.integer(1, max_rows)
    n = rng.integer(1, max_cols)
    A = RationalMatrix.from_rows([
        [F(rng.integer(-6, 6), rng.integer(1, 3)) for _ in range(n)]
        for _ in range(m)
    ])
    b = [F(rng.integer(-6, 6), rng.integer(1, 3)) for _ in range(m)]
    return A, b


def test_random_certificates_verify_independently():
    rng = SeededGenerator(42)
    feas = infeas = 0
    for _ in range(300):
        A, b = _random_instance(rng)
        r = solve_feasibility(A, b)
        if r.feasible:
            feas += 1
            check_feasible(A, b, r.x)
        else:
            infeas += 1
            check_farkas(A, b, r.farkas)
    assert feas > 0 and infeas > 0


def test_positive_row_scaling_preserves_outcome():
    rng = SeededGenerator(7)
    for _ in range(60):
        A, b = _random_instance(rng)
        before = solve_feasibility(A, b).feasible
        scales = [F(rng.integer(1, 5), rng.integer(1, 5)) for _ in range(A.rows)]
        A2 = RationalMatrix.from_rows([
            [scales[i] * A[i, j] for j in range(A.cols)] for i in range(A.rows)
        ])
        b2 = [scales[i] * b[i] for i in range(A.rows)]
        assert solve_feasibility(A2, b2).feasible == before


def test_feasible_point_refutes_any_farkas_candidate():
    # with x feasible, any y with y^T A <= 0 must have y^T b <= 0
    A = RationalMatrix.from_rows([[1, -1], [0, 1]])
    b = [F(1), F(2)]
    r = solve_feasibility(A, b)
    assert r.feasible
    for y in [(F(-1), F(0)), (F(-1), F(-2)), (F(0), F(-1))]:
        lhs_ok = all(
            sum(y[i] * A[i, j] for i in range(2)) <= 0 for j in range(2)
        )
        if lhs_ok:
            assert sum(y[i] * b[i] for i in range(2)) <= 0
