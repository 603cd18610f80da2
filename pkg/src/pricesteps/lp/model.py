"""Sparse linear program container with stable handles and tag lookup."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

import numpy as np
import scipy.sparse as sp

LE, EQ, GE = "<=", "=", ">="
SENSES = (LE, EQ, GE)


class LPError(ValueError):
    """Raised for malformed LP construction (bad bounds, unknown handles, tag clashes)."""


@dataclass
class LinearProgram:
    """Minimisation LP built incrementally.

    Variables and constraints are addressed by integer handles that never
    change for the lifetime of the program. Every variable and constraint
    carries a hashable tag, unique within its kind, so builders can look
    rows up again (e.g. the market-clearing row of a zone and hour).
    """

    name: str = "lp"
    lower: list[float] = field(default_factory=list)
    upper: list[float] = field(default_factory=list)
    cost: list[float] = field(default_factory=list)
    var_tags: list[Hashable] = field(default_factory=list)
    rows: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    senses: list[str] = field(default_factory=list)
    rhs: list[float] = field(default_factory=list)
    con_tags: list[Hashable] = field(default_factory=list)
    _var_index: dict = field(default_factory=dict, repr=False)
    _con_index: dict = field(default_factory=dict, repr=False)
    _freed: set = field(default_factory=set, repr=False)

    @property
    def n_vars(self) -> int:
        return len(self.lower)

    @property
    def n_cons(self) -> int:
        return len(self.rows)

    def add_variable(self, lower: float = 0.0, upper: float = math.inf,
                     cost: float = 0.0, tag: Hashable = None) -> int:
        lower, upper, cost = float(lower), float(upper), float(cost)
        if math.isnan(lower) or math.isnan(upper) or math.isnan(cost):
            raise LPError(f"NaN in bounds/cost of variable {tag!r}")
        if lower > upper:
            raise LPError(f"inverted bounds [{lower}, {upper}] for variable {tag!r}")
        if lower == math.inf or upper == -math.inf:
            raise LPError(f"empty domain for variable {tag!r}")
        handle = len(self.lower)
        if tag is None:
            tag = ("var", handle)
        if tag in self._var_index:
            raise LPError(f"tag collision: variable {tag!r}")
        self._var_index[tag] = handle
        self.lower.append(lower)
        self.upper.append(upper)
        self.cost.append(cost)
        self.var_tags.append(tag)
        return handle

    def add_constraint(self, row: Mapping[int, float] | Iterable[tuple[int, float]],
                       sense: str, rhs: float, tag: Hashable = None) -> int:
        if sense not in SENSES:
            raise LPError(f"unknown sense {sense!r}")
        items = row.items() if isinstance(row, Mapping) else row
        merged: dict[int, float] = {}
        for h, a in items:
            if not isinstance(h, (int, np.integer)) or not 0 <= h < self.n_vars:
                raise LPError(f"unknown variable handle {h!r} in constraint {tag!r}")
            if h in self._freed:
                raise LPError(f"freed variable handle {h} in constraint {tag!r}")
            merged[int(h)] = merged.get(int(h), 0.0) + float(a)
        handle = len(self.rows)
        if tag is None:
            tag = ("con", handle)
        if tag in self._con_index:
            raise LPError(f"tag collision: constraint {tag!r}")
        self._con_index[tag] = handle
        idx = np.fromiter(merged.keys(), dtype=np.int64, count=len(merged))
        val = np.fromiter(merged.values(), dtype=float, count=len(merged))
        self.rows.append((idx, val))
        self.senses.append(sense)
        self.rhs.append(float(rhs))
        self.con_tags.append(tag)
        return handle

    def free_variable(self, handle: int) -> None:
        """Retire a variable that no constraint references.

        The handle stays reserved (other handles keep their meaning); the
        variable is pinned to zero so it drops out of the optimisation.
        """
        for idx, _ in self.rows:
            if handle in idx:
                raise LPError(f"variable {handle} still referenced by a constraint")
        self._freed.add(handle)
        self.lower[handle] = self.upper[handle] = self.cost[handle] = 0.0

    def variable(self, tag: Hashable) -> int:
        try:
            return self._var_index[tag]
        except KeyError:
            raise KeyError(f"no variable tagged {tag!r}") from None

    def constraint(self, tag: Hashable) -> int:
        try:
            return self._con_index[tag]
        except KeyError:
            raise KeyError(f"no constraint tagged {tag!r}") from None

    def set_rhs(self, handle: int, value: float) -> None:
        self.rhs[handle] = float(value)

    def set_cost(self, handle: int, value: float) -> None:
        self.cost[handle] = float(value)

    def copy(self) -> "LinearProgram":
        other = LinearProgram(
            name=self.name, lower=list(self.lower), upper=list(self.upper),
            cost=list(self.cost), var_tags=list(self.var_tags), rows=list(self.rows),
            senses=list(self.senses), rhs=list(self.rhs), con_tags=list(self.con_tags),
        )
        other._var_index = dict(self._var_index)
        other._con_index = dict(self._con_index)
        other._freed = set(self._freed)
        return other

    def matrix(self) -> sp.csr_matrix:
        """Constraint matrix as CSR (rows in handle order)."""
        indptr = np.zeros(self.n_cons + 1, dtype=np.int64)
        for i, (idx, _) in enumerate(self.rows):
            indptr[i + 1] = indptr[i] + len(idx)
        if self.rows:
            indices = np.concatenate([r[0] for r in self.rows])
            data = np.concatenate([r[1] for r in self.rows])
        else:
            indices = np.zeros(0, dtype=np.int64)
            data = np.zeros(0)
        return sp.csr_matrix((data, indices, indptr), shape=(self.n_cons, self.n_vars))

    def arrays(self):
        """(c, A, senses, b, lower, upper) as numpy/scipy objects."""
        return (np.asarray(self.cost, dtype=float), self.matrix(),
                np.asarray(self.senses), np.asarray(self.rhs, dtype=float),
                np.asarray(self.lower, dtype=float), np.asarray(self.upper, dtype=float))

    def check_bounds(self) -> None:
        for h, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if lo > hi:
                raise LPError(f"inverted bounds on variable {self.var_tags[h]!r}")


@dataclass(frozen=True)
class Solution:
    """Result of a solve.

    ``dual[k]`` is the derivative of the optimal objective with respect to
    the right-hand side of constraint ``k``.
    """

    status: str
    objective: float
    primal: np.ndarray
    dual: np.ndarray
    reduced_cost: np.ndarray
    solver: str
    message: str = ""
    hint: tuple = ()
    basis: "BasisInfo | None" = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    def value(self, handle: int) -> float:
        return float(self.primal[handle])

    def dual_of(self, handle: int) -> float:
        return float(self.dual[handle])


@dataclass(frozen=True)
class BasisInfo:
    """Final basis of a simplex solve, expressed for the original constraint rows.

    ``rhs_lower``/``rhs_upper`` give, per constraint, how far its right-hand
    side may move down/up while the optimal basis stays primal feasible
    (classic right-hand-side ranging). Inside that interval the objective is
    linear in the right-hand side with slope equal to the dual.
    """

    rhs_lower: np.ndarray
    rhs_upper: np.ndarray
    iterations: int

    def nondegenerate(self, handle: int, eps: float) -> bool:
        return self.rhs_lower[handle] <= -eps and self.rhs_upper[handle] >= eps


def primal_residual(lp: LinearProgram, x: np.ndarray) -> float:
    """Largest violation of any row or bound by ``x``."""
    c, A, senses, b, lo, hi = lp.arrays()
    worst = 0.0
    if lp.n_cons:
        ax = A @ x
        viol = np.where(senses == LE, ax - b, np.where(senses == GE, b - ax, np.abs(ax - b)))
        worst = max(worst, float(np.max(viol, initial=0.0)))
    if lp.n_vars:
        worst = max(worst, float(np.max(lo - x, initial=0.0)), float(np.max(x - hi, initial=0.0)))
    return worst


def dual_objective(lp: LinearProgram, y: np.ndarray, tol: float = 1e-9) -> float:
    """Lagrangian dual bound b'y + sum of bound terms for the reduced costs.

    Equals the primal optimum when (y, reduced costs) is dual feasible and
    optimal. A reduced cost (beyond ``tol``) pushing against an infinite
    bound yields -inf.
    """
    c, A, senses, b, lo, hi = lp.arrays()
    d = c - A.T @ y if lp.n_cons else c.copy()
    total = float(b @ y) if lp.n_cons else 0.0
    pos, neg = d > tol, d < -tol
    if np.any(pos & ~np.isfinite(lo)) or np.any(neg & ~np.isfinite(hi)):
        return -math.inf
    total += float(d[pos] @ lo[pos]) + float(d[neg] @ hi[neg])
    # sub-tolerance reduced costs still contribute on finite bounds
    small = ~(pos | neg)
    at = np.where(d[small] >= 0, lo[small], hi[small])
    fin = np.isfinite(at)
    total += float(d[small][fin] @ at[fin])
    return total
