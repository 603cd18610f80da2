import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from pricesteps.lp import (EQ, GE, LE, LinearProgram, LPError, SizeCapExceeded, SolverError,
                           primal_residual, reference_simplex, solve, write_lp)
from pricesteps.lp.model import dual_objective
from pricesteps.lp.simplex import bounded_simplex

SOLVERS = ["highs", "simplex"]


@pytest.mark.parametrize("solver", SOLVERS)
def test_single_bound_row_dual_is_one(solver):
    lp = LinearProgram()
    x = lp.add_variable(cost=1.0)
    r = lp.add_constraint({x: 1.0}, GE, 3.0, tag="floor")
    sol = solve(lp, solver=solver)
    assert sol.optimal
    assert sol.objective == pytest.approx(3.0, abs=1e-9)
    assert sol.dual_of(r) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("solver", SOLVERS)
def test_two_hour_generator_prices(solver):
    lp = LinearProgram()
    rows = []
    for t, d in enumerate([10.0, 20.0]):
        g = lp.add_variable(cost=119.2 / 0.40, tag=("gen", t))
        rows.append(lp.add_constraint({g: 1.0}, EQ, d, tag=("clear", t)))
    sol = solve(lp, solver=solver)
    for r in rows:
        assert sol.dual_of(r) == pytest.approx(298.0, abs=1e-9)


@pytest.mark.parametrize("solver", SOLVERS)
def test_infeasible_reports_hint(solver):
    lp = LinearProgram()
    x = lp.add_variable(upper=1.0)
    lp.add_constraint({x: 1.0}, GE, 5.0, tag="too_much")
    sol = solve(lp, solver=solver)
    assert sol.status == "infeasible"
    assert "too_much" in sol.hint


@pytest.mark.parametrize("solver", SOLVERS)
def test_unbounded(solver):
    lp = LinearProgram()
    x = lp.add_variable(lower=-math.inf, cost=1.0)
    lp.add_constraint({x: 1.0}, LE, 4.0)
    assert solve(lp, solver=solver).status == "unbounded"


@pytest.mark.parametrize("solver", SOLVERS)
def test_empty_program(solver):
    sol = solve(LinearProgram(), solver=solver)
    assert sol.optimal and sol.objective == 0.0


def test_tag_collision():
    lp = LinearProgram()
    lp.add_variable(tag="a")
    with pytest.raises(LPError, match="tag collision"):
        lp.add_variable(tag="a")
    x = lp.variable("a")
    lp.add_constraint({x: 1.0}, LE, 1.0, tag="r")
    with pytest.raises(LPError, match="tag collision"):
        lp.add_constraint({x: 1.0}, LE, 1.0, tag="r")


def test_inverted_bounds_rejected():
    with pytest.raises(LPError, match="inverted bounds"):
        LinearProgram().add_variable(lower=5.0, upper=3.0)


def test_empty_row_accepted():
    lp = LinearProgram()
    r = lp.add_constraint({}, LE, 1.0)
    assert lp.n_cons == 1 and solve(lp).dual_of(r) == pytest.approx(0.0)


def test_freed_handle_rejected():
    lp = LinearProgram()
    x = lp.add_variable(cost=3.0)
    y = lp.add_variable(cost=1.0)
    lp.free_variable(x)
    with pytest.raises(LPError, match="freed"):
        lp.add_constraint({x: 1.0}, GE, 1.0)
    lp.add_constraint({y: 1.0}, GE, 2.0)
    assert solve(lp).objective == pytest.approx(2.0)


def test_free_variable_still_referenced():
    lp = LinearProgram()
    x = lp.add_variable()
    lp.add_constraint({x: 1.0}, LE, 1.0)
    with pytest.raises(LPError):
        lp.free_variable(x)


def test_unknown_handle_and_sense():
    lp = LinearProgram()
    with pytest.raises(LPError):
        lp.add_constraint({3: 1.0}, LE, 1.0)
    x = lp.add_variable()
    with pytest.raises(LPError):
        lp.add_constraint({x: 1.0}, "<", 1.0)
    with pytest.raises(KeyError):
        lp.variable("nope")


def test_unknown_solver():
    with pytest.raises(SolverError):
        solve(LinearProgram(), solver="cplex")


def test_size_cap():
    lp = LinearProgram()
    for _ in range(11):
        lp.add_variable(cost=1.0)
    with pytest.raises(SizeCapExceeded):
        reference_simplex(lp, size_cap=10)


def test_copy_is_independent():
    lp = LinearProgram()
    x = lp.add_variable(cost=1.0)
    r = lp.add_constraint({x: 1.0}, GE, 1.0)
    other = lp.copy()
    other.set_rhs(r, 2.0)
    assert solve(lp).objective == pytest.approx(1.0)
    assert solve(other).objective == pytest.approx(2.0)


def test_write_lp(tmp_path):
    lp = LinearProgram(name="demo")
    x = lp.add_variable(cost=2.0, upper=4.0, tag="x")
    y = lp.add_variable(lower=-math.inf, cost=-1.0, tag="y")
    lp.add_constraint({x: 1.0, y: -1.0}, GE, 1.0, tag=("row", 0))
    text = write_lp(lp, tmp_path / "m.lp").read_text()
    assert text.startswith("\\ demo\nMinimize")
    assert "c0: 1.0 x0 - 1.0 x1 >= 1.0" in text
    assert "-inf <= x1 <= +inf" in text
    assert "\\ ('row', 0)" in text
    assert text.rstrip().endswith("End")


def test_bland_and_dantzig_agree():
    c = np.array([-3.0, -5.0])
    A = np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 2.0]])
    b = np.array([4.0, 12.0, 18.0])
    lo, hi = np.zeros(2), np.full(2, np.inf)
    senses = np.array([LE, LE, LE])
    r1 = bounded_simplex(c, A, senses, b, lo, hi, rule="dantzig")
    r2 = bounded_simplex(c, A, senses, b, lo, hi, rule="bland")
    assert r1.objective == pytest.approx(-36.0) and r2.objective == pytest.approx(-36.0)
    np.testing.assert_allclose(r1.x, [2.0, 6.0], atol=1e-12)
    np.testing.assert_allclose(r1.y, r2.y, atol=1e-12)
    np.testing.assert_allclose(r1.y, [0.0, -1.5, -1.0], atol=1e-12)


def test_ranging_on_textbook_problem():
    lp = LinearProgram()
    x = lp.add_variable(cost=-3.0)
    y = lp.add_variable(cost=-5.0)
    lp.add_constraint({x: 1.0}, LE, 4.0)
    r2 = lp.add_constraint({y: 2.0}, LE, 12.0)
    r3 = lp.add_constraint({x: 3.0, y: 2.0}, LE, 18.0)
    sol = reference_simplex(lp)
    # row 3 stays binding with the same basis while 12 <= b3 <= 24
    assert sol.basis.rhs_lower[r3] == pytest.approx(-6.0)
    assert sol.basis.rhs_upper[r3] == pytest.approx(6.0)
    assert sol.basis.rhs_lower[r2] == pytest.approx(-6.0)
    assert sol.basis.rhs_upper[r2] == pytest.approx(6.0)
    assert sol.basis.nondegenerate(r3, 1.0)


def _random_lp(rng, m, n):
    """Feasible, bounded LP: box bounds on every variable and a known feasible point."""
    lp = LinearProgram()
    x0 = rng.uniform(0.0, 5.0, n)
    for j in range(n):
        lp.add_variable(lower=rng.choice([0.0, -2.0, -math.inf]) if j % 3 else 0.0,
                        upper=10.0, cost=float(rng.normal()))
    for i in range(m):
        cols = rng.choice(n, size=min(n, 3), replace=False)
        coef = rng.normal(size=cols.size)
        act = float(coef @ x0[cols])
        sense = rng.choice([LE, GE, EQ])
        rhs = act + (rng.uniform(0, 2) if sense == LE else -rng.uniform(0, 2) if sense == GE else 0.0)
        lp.add_constraint(dict(zip(cols.tolist(), coef.tolist())), sense, rhs)
    # lower bounds of -inf need a floor to keep the problem bounded
    for j in range(n):
        if lp.lower[j] == -math.inf:
            lp.add_constraint({j: 1.0}, GE, -20.0)
    return lp


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10_000), st.integers(1, 12), st.integers(1, 15))
def test_random_lps_match_highs(seed, m, n):
    lp = _random_lp(np.random.default_rng(seed), m, n)
    a = solve(lp, solver="highs")
    b = solve(lp, solver="simplex")
    assert a.status == b.status == "optimal"
    assert b.objective == pytest.approx(a.objective, rel=1e-7, abs=1e-7)
    assert primal_residual(lp, b.primal) <= 1e-7
    assert dual_objective(lp, b.dual) == pytest.approx(b.objective, rel=1e-7, abs=1e-7)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_complementary_slackness(seed):
    lp = _random_lp(np.random.default_rng(seed), 8, 10)
    sol = reference_simplex(lp)
    c, A, senses, b, lo, hi = lp.arrays()
    slack = A @ sol.primal - b
    y = sol.dual
    assert np.all(np.abs(y * slack) <= 1e-7)
    assert np.all(y[senses == LE] <= 1e-9)
    assert np.all(y[senses == GE] >= -1e-9)


def test_simplex_is_deterministic():
    lp = _random_lp(np.random.default_rng(7), 10, 14)
    a, b = reference_simplex(lp), reference_simplex(lp)
    assert np.array_equal(a.primal, b.primal)
    assert np.array_equal(a.dual, b.dual)
    assert a.message == b.message
