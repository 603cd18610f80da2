"""Bounded-variable revised primal simplex on a sparse LU factorisation.

This is the oracle solver: deterministic, and able to report its final
basis, which gives exact right-hand-side ranging. It works on the
computational form

    min c'x  s.t.  A x (<=,=,>=) b,  lo <= x <= hi

after shifting every variable to a zero lower bound, adding one slack per
inequality row and one artificial per row that has no usable slack.

Pricing is Dantzig's rule (largest reduced cost) until a run of degenerate
pivots appears; from then on the phase uses Bland's rule, which cannot cycle.
The basis inverse is kept as an LU factorisation plus a product-form eta file
that is folded back into a fresh factorisation every ``REFACTOR`` pivots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .model import EQ, LE

STALL_LIMIT = 200
REFACTOR = 64


class SizeCapExceeded(ValueError):
    pass


@dataclass
class SimplexResult:
    status: str
    x: np.ndarray
    y: np.ndarray
    d: np.ndarray
    objective: float
    iterations: int
    rhs_lower: np.ndarray
    rhs_upper: np.ndarray
    infeasible_rows: tuple = ()


def _column_map(lo, hi):
    """Map original variables onto nonnegative internal columns.

    Returns (orig index, sign, offset, internal upper) per internal column.
    """
    cols = []
    for j, (l, u) in enumerate(zip(lo, hi)):
        if math.isfinite(l):
            cols.append((j, 1.0, l, u - l))
        elif math.isfinite(u):
            cols.append((j, -1.0, u, math.inf))
        else:
            cols.append((j, 1.0, 0.0, math.inf))
            cols.append((j, -1.0, 0.0, math.inf))
    return cols


class _Basis:
    """B^-1 as LU of a reference basis times a list of eta transformations."""

    def __init__(self, full: sp.csc_matrix, basis: np.ndarray):
        self.full = full
        self.m = full.shape[0]
        self.refactor(basis)

    def refactor(self, basis: np.ndarray) -> None:
        B = self.full[:, basis].tocsc()
        self.lu = splu(B, permc_spec="COLAMD", diag_pivot_thresh=1.0)
        self.etas: list[tuple[int, np.ndarray]] = []

    def ftran(self, a: np.ndarray) -> np.ndarray:
        v = self.lu.solve(a)
        for r, w in self.etas:
            vr = v[r] / w[r]
            v -= w * vr
            v[r] = vr
        return v

    def btran(self, u: np.ndarray) -> np.ndarray:
        u = np.array(u, dtype=float)
        for r, w in reversed(self.etas):
            u[r] = u[r] - (u @ w - u[r]) / w[r]
        return self.lu.solve(u, trans="T")

    def update(self, r: int, w: np.ndarray) -> None:
        self.etas.append((r, w.copy()))

    def inverse(self) -> np.ndarray:
        return self.lu.solve(np.eye(self.m)) if self.m else np.zeros((0, 0))


def bounded_simplex(c, A, senses, b, lo, hi, tol=1e-9, max_iter=200_000,
                    rule: str = "dantzig") -> SimplexResult:
    if rule not in ("dantzig", "bland"):
        raise ValueError(f"unknown pricing rule {rule!r}")
    A = sp.csr_matrix(A, dtype=float)
    m, n = A.shape
    senses = np.asarray(senses)
    c = np.asarray(c, dtype=float)
    b = np.asarray(b, dtype=float)

    cols = _column_map(lo, hi)
    orig = np.array([k[0] for k in cols], dtype=np.int64)
    sign = np.array([k[1] for k in cols])
    offset = np.array([k[2] for k in cols])
    n_int = len(cols)

    A_int = (A[:, orig] @ sp.diags(sign)) if n_int else sp.csr_matrix((m, 0))
    c_int = c[orig] * sign if n_int else np.zeros(0)
    # a split free variable has offset 0 on both halves, so take the first
    seen = np.zeros(n, dtype=bool)
    shift_once = np.zeros(n)
    for k in range(n_int):
        if not seen[orig[k]]:
            shift_once[orig[k]] = offset[k]
            seen[orig[k]] = True
    obj_offset = float(c @ shift_once) if n else 0.0
    b_work = b - (A @ shift_once if n else 0.0)

    ineq = np.flatnonzero(senses != EQ)
    n_slack = len(ineq)
    slack_sign = np.where(senses[ineq] == LE, 1.0, -1.0)

    flip = np.where(b_work < 0, -1.0, 1.0)
    b_work = b_work * flip
    A_int = sp.diags(flip) @ A_int
    S = sp.csr_matrix((slack_sign * flip[ineq], (ineq, np.arange(n_slack))), shape=(m, n_slack))

    init_col = np.empty(m, dtype=np.int64)
    art_rows = []
    slack_of_row = {int(r): k for k, r in enumerate(ineq)}
    s_diag = slack_sign * flip[ineq]
    for i in range(m):
        k = slack_of_row.get(i)
        if k is not None and s_diag[k] > 0:
            init_col[i] = n_int + k
        else:
            init_col[i] = -1
            art_rows.append(i)
    n_art = len(art_rows)
    Art = sp.csr_matrix((np.ones(n_art), (np.array(art_rows, dtype=np.int64), np.arange(n_art))),
                        shape=(m, n_art))
    for a, i in enumerate(art_rows):
        init_col[i] = n_int + n_slack + a

    full = sp.hstack([A_int, S, Art]).tocsc()
    fullT = full.T.tocsr()
    N = full.shape[1]
    ub = np.concatenate([np.array([k[3] for k in cols]), np.full(n_slack, math.inf),
                         np.full(n_art, math.inf)])
    cost2 = np.concatenate([c_int, np.zeros(n_slack + n_art)])
    cost1 = np.zeros(N)
    cost1[n_int + n_slack:] = 1.0

    basis = init_col.copy()
    is_basic = np.zeros(N, dtype=bool)
    is_basic[basis] = True
    at_upper = np.zeros(N, dtype=bool)
    fac = _Basis(full, basis)
    xB = b_work.copy()
    iterations = 0

    def column(j: int) -> np.ndarray:
        a = np.zeros(m)
        lo_, hi_ = full.indptr[j], full.indptr[j + 1]
        a[full.indices[lo_:hi_]] = full.data[lo_:hi_]
        return a

    def nonbasic_values() -> np.ndarray:
        xN = np.where(at_upper, ub, 0.0)
        xN[is_basic] = 0.0
        xN[~np.isfinite(xN)] = 0.0
        return xN

    def recompute_xB() -> np.ndarray:
        return fac.ftran(b_work - full @ nonbasic_values())

    art_start = n_int + n_slack

    def run(cost, fixed, phase_one=False):
        nonlocal iterations, xB
        movable = ~fixed
        bland = rule == "bland"
        stall = 0
        while True:
            # phase one is done once no artificial carries a value
            if phase_one and float(np.sum(np.maximum(xB[basis >= art_start], 0.0))) <= tol:
                return "optimal"
            y = fac.btran(cost[basis])
            d = cost - fullT @ y
            elig = movable & ~is_basic & (((~at_upper) & (d < -tol)) | (at_upper & (d > tol)))
            cand = np.flatnonzero(elig)
            if cand.size == 0:
                return "optimal"
            if iterations >= max_iter:
                return "iteration_limit"
            iterations += 1
            j = int(cand[0]) if bland else int(cand[np.argmax(np.abs(d[cand]))])
            direction = -1.0 if at_upper[j] else 1.0
            w = fac.ftran(column(j))
            delta = direction * w
            ubB = ub[basis]
            theta = math.inf
            rows = np.empty(0, dtype=np.int64)
            dec = delta > tol
            inc = (delta < -tol) & np.isfinite(ubB)
            ratios = np.full(m, math.inf)
            ratios[dec] = np.maximum(xB[dec], 0.0) / delta[dec]
            ratios[inc] = np.maximum(ubB[inc] - xB[inc], 0.0) / (-delta[inc])
            if m:
                theta = float(ratios.min())
                if math.isfinite(theta):
                    rows = np.flatnonzero(ratios <= theta + tol * max(1.0, abs(theta)))
            flip_range = ub[j]
            if flip_range < theta:
                if not math.isfinite(flip_range):
                    return "unbounded"
                xB -= flip_range * delta
                at_upper[j] = not at_upper[j]
                continue
            if not math.isfinite(theta):
                return "unbounded"
            stall = stall + 1 if theta <= tol else 0
            if stall >= STALL_LIMIT:
                bland = True
            if bland:
                r = int(rows[np.argmin(basis[rows])])
            else:
                r = int(rows[np.argmax(np.abs(delta[rows]))])
            leaving = basis[r]
            enter_val = theta if direction > 0 else ub[j] - theta
            xB -= theta * delta
            leave_upper = bool(delta[r] < 0)
            basis[r] = j
            xB[r] = enter_val
            is_basic[leaving] = False
            is_basic[j] = True
            at_upper[leaving] = leave_upper
            at_upper[j] = False
            if len(fac.etas) + 1 >= REFACTOR:
                fac.refactor(basis)
                xB = recompute_xB()
            else:
                fac.update(r, w)

    fixed = ub <= 0.0
    status = "optimal"
    infeasible_rows: tuple = ()
    if n_art:
        status = run(cost1, fixed, phase_one=True)
        art_basic = basis >= n_int + n_slack
        infeas = float(np.sum(np.maximum(xB[art_basic], 0.0)))
        if status == "optimal" and infeas > 1e-7:
            status = "infeasible"
            infeasible_rows = tuple(int(r) for r in np.flatnonzero(art_basic & (xB > 1e-7)))
    if status == "optimal":
        ub[n_int + n_slack:] = 0.0
        fixed = ub <= 0.0
        xB[basis >= n_int + n_slack] = 0.0
        status = run(cost2, fixed)

    fac.refactor(basis)
    if status == "optimal":
        xB = recompute_xB()
    x_full = nonbasic_values()
    x_full[basis] = xB
    y_flip = fac.btran(cost2[basis])
    d_full = cost2 - fullT @ y_flip

    x = shift_once.copy()
    np.add.at(x, orig, sign * x_full[:n_int])
    y = y_flip * flip
    d = np.zeros(n)
    # reduced cost of an original variable: take it from its first internal column
    first = {}
    for k in range(n_int):
        first.setdefault(int(orig[k]), k)
    for j, k in first.items():
        d[j] = d_full[k] * sign[k]

    lo_rng = np.full(m, -math.inf)
    hi_rng = np.full(m, math.inf)
    if status == "optimal" and m:
        lo_rng, hi_rng = _rhs_ranging(fac.inverse() * flip[None, :], xB, ub[basis])

    objective = float(c_int @ x_full[:n_int]) + obj_offset if status == "optimal" else math.nan
    return SimplexResult(status=status, x=x, y=y, d=d, objective=objective,
                         iterations=iterations, rhs_lower=lo_rng, rhs_upper=hi_rng,
                         infeasible_rows=infeasible_rows)


def _rhs_ranging(G: np.ndarray, xB: np.ndarray, ubB: np.ndarray, feas_tol: float = 1e-9):
    """How far each right-hand side may move before the basis changes.

    Column i of ``G`` is d xB / d b_i. Returns (lower offsets <= 0, upper offsets >= 0).
    """
    xb = np.clip(xB, 0.0, None)[:, None]
    room = (ubB - np.clip(xB, 0.0, None))[:, None]
    pos, neg = G > 1e-12, G < -1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        # raising b_i: basics with negative slope run into zero, positive ones into ub
        up = np.minimum(np.where(neg, xb / -G, np.inf).min(axis=0, initial=np.inf),
                        np.where(pos, room / G, np.inf).min(axis=0, initial=np.inf))
        down = np.minimum(np.where(pos, xb / G, np.inf).min(axis=0, initial=np.inf),
                          np.where(neg, room / -G, np.inf).min(axis=0, initial=np.inf))
    up = np.where(up < feas_tol, 0.0, up)
    down = np.where(down < feas_tol, 0.0, down)
    return -down, up
