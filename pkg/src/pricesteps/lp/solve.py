"""Solver front end: scaling, backend dispatch, post-solve certification."""

from __future__ import annotations

import math
import os

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from . import scaling as scl
from .model import EQ, GE, LE, BasisInfo, LinearProgram, Solution, dual_objective
from .simplex import SizeCapExceeded, bounded_simplex

DEFAULT_TOLERANCE = 1e-7
SOLVER_ENV = "PRICESTEPS_SOLVER"
SOLVERS = ("highs", "simplex")


class SolverError(RuntimeError):
    """Backend failure or a solution that fails certification."""


def default_solver() -> str:
    return os.environ.get(SOLVER_ENV, "highs")


def _scaled(lp: LinearProgram):
    c, A, senses, b, lo, hi = lp.arrays()
    s = scl.equilibrate(A)
    cs, As, bs, los, his = scl.apply(s, c, A, b, lo, hi)
    return s, (cs, As, senses, bs, los, his)


def _split(As, senses, bs):
    le = np.flatnonzero(senses == LE)
    ge = np.flatnonzero(senses == GE)
    eq = np.flatnonzero(senses == EQ)
    ub_rows = np.concatenate([le, ge])
    A_ub = sp.vstack([As[le], -As[ge]]).tocsr() if ub_rows.size else None
    b_ub = np.concatenate([bs[le], -bs[ge]]) if ub_rows.size else None
    A_eq = As[eq] if eq.size else None
    b_eq = bs[eq] if eq.size else None
    return le, ge, eq, A_ub, b_ub, A_eq, b_eq


def _highs(cs, As, senses, bs, los, his, tol):
    m, n = As.shape
    if n == 0:
        # linprog rejects an empty cost vector; rows can only compare 0 with b
        ok = np.all(np.where(senses == LE, bs >= -tol, np.where(senses == GE, bs <= tol,
                                                                 np.abs(bs) <= tol)))
        return ("optimal" if ok else "infeasible"), np.zeros(0), np.zeros(m), np.zeros(0), "empty"
    le, ge, eq, A_ub, b_ub, A_eq, b_eq = _split(As, senses, bs)
    bounds = np.column_stack([np.where(np.isfinite(los), los, -np.inf),
                              np.where(np.isfinite(his), his, np.inf)]) if n else None
    res = linprog(cs, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds,
                  method="highs-ds",
                  options={"primal_feasibility_tolerance": min(tol, 1e-9),
                           "dual_feasibility_tolerance": min(tol, 1e-9),
                           "presolve": True})
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(res.status, "error")
    x = np.asarray(res.x) if res.x is not None else np.full(n, math.nan)
    y = np.zeros(m)
    d = np.zeros(n)
    if status == "optimal":
        if eq.size:
            y[eq] = res.eqlin.marginals
        if le.size:
            y[le] = res.ineqlin.marginals[: le.size]
        if ge.size:
            y[ge] = -res.ineqlin.marginals[le.size:]
        d = np.asarray(res.lower.marginals) + np.asarray(res.upper.marginals)
    return status, x, y, d, res.message


def _elastic_hint(cs, As, senses, bs, los, his, limit=20):
    """Rows that must be relaxed to restore feasibility (phase-one style)."""
    m, n = As.shape
    I = sp.identity(m, format="csr")
    A2 = sp.hstack([As, I, -I]).tocsr()
    c2 = np.concatenate([np.zeros(n), np.ones(2 * m)])
    lo2 = np.concatenate([los, np.zeros(2 * m)])
    hi2 = np.concatenate([his, np.full(2 * m, np.inf)])
    st, x, *_ = _highs(c2, A2, senses, bs, lo2, hi2, 1e-9)
    if st != "optimal":
        return ()
    viol = x[n:n + m] + x[n + m:]
    return tuple(int(i) for i in np.flatnonzero(viol > 1e-7)[:limit])


def solve(lp: LinearProgram, solver: str | None = None,
          tolerance: float = DEFAULT_TOLERANCE, size_cap: int = 5000) -> Solution:
    """Solve ``lp`` and certify the result.

    An optimal solution is checked on the scaled data: the largest row or
    bound violation must not exceed ``tolerance`` and the primal/dual
    objective gap must not exceed ``tolerance`` relative to max(1, |obj|).

    Raises:
        SolverError: unknown backend, backend error or failed certification.
    """
    solver = solver or default_solver()
    if solver not in SOLVERS:
        raise SolverError(f"unknown solver {solver!r}; choose from {SOLVERS}")
    lp.check_bounds()
    s, (cs, As, senses, bs, los, his) = _scaled(lp)
    basis = None
    hint: tuple = ()
    if solver == "simplex":
        if lp.n_vars > size_cap:
            raise SizeCapExceeded(
                f"reference simplex limited to {size_cap} variables, LP has {lp.n_vars}")
        res = bounded_simplex(cs, As, senses, bs, los, his)
        status, xs, ys, ds, msg = res.status, res.x, res.y, res.d, f"{res.iterations} pivots"
        if status == "optimal":
            basis = BasisInfo(rhs_lower=res.rhs_lower / s.row, rhs_upper=res.rhs_upper / s.row,
                              iterations=res.iterations)
        if status == "infeasible":
            hint = tuple(lp.con_tags[i] for i in res.infeasible_rows[:20])
    else:
        status, xs, ys, ds, msg = _highs(cs, As, senses, bs, los, his, tolerance)
        if status == "infeasible":
            hint = tuple(lp.con_tags[i] for i in _elastic_hint(cs, As, senses, bs, los, his))
    if status == "error" or status == "iteration_limit":
        raise SolverError(f"{solver} failed: {msg}")
    if status != "optimal":
        return Solution(status=status, objective=math.nan, primal=np.full(lp.n_vars, math.nan),
                        dual=np.full(lp.n_cons, math.nan),
                        reduced_cost=np.full(lp.n_vars, math.nan), solver=solver,
                        message=str(msg), hint=hint)

    x = s.unscale_primal(xs)
    y = s.unscale_dual(ys)
    d = s.unscale_reduced(ds)
    c = np.asarray(lp.cost)
    objective = float(c @ x) if lp.n_vars else 0.0

    scaled_lp_resid = _scaled_residual(As, senses, bs, los, his, xs)
    if scaled_lp_resid > tolerance:
        raise SolverError(f"{solver}: primal residual {scaled_lp_resid:.3e} exceeds {tolerance:.1e}")
    dual_obj = dual_objective(lp, y, tol=1e-9)
    gap = abs(objective - dual_obj)
    if not gap <= tolerance * max(1.0, abs(objective)):
        raise SolverError(f"{solver}: duality gap {gap:.3e} exceeds tolerance")
    return Solution(status="optimal", objective=objective, primal=x, dual=y, reduced_cost=d,
                    solver=solver, message=str(msg), basis=basis)


def _scaled_residual(As, senses, bs, los, his, xs) -> float:
    worst = 0.0
    if As.shape[0]:
        ax = As @ xs
        viol = np.where(senses == LE, ax - bs, np.where(senses == GE, bs - ax, np.abs(ax - bs)))
        worst = float(np.max(viol, initial=0.0))
    if As.shape[1]:
        with np.errstate(invalid="ignore"):
            worst = max(worst, float(np.nanmax(np.where(np.isfinite(los), los - xs, 0.0), initial=0.0)),
                        float(np.nanmax(np.where(np.isfinite(his), xs - his, 0.0), initial=0.0)))
    return worst


def reference_simplex(lp: LinearProgram, size_cap: int = 5000,
                      tolerance: float = DEFAULT_TOLERANCE) -> Solution:
    """Solve with the deterministic built-in simplex (oracle path)."""
    return solve(lp, solver="simplex", tolerance=tolerance, size_cap=size_cap)
