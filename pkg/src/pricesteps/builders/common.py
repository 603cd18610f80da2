"""Constraint helpers shared by several technologies."""

from __future__ import annotations

from typing import Sequence

from ..lp import EQ, LinearProgram
from .registry import VariableRegistry


def wrap(t: int, T: int) -> int:
    """Successor hour with cyclic boundary."""
    return (t + 1) % T


def continuity(lp: LinearProgram, zone: str, unit: str, label: str, level: Sequence[int],
               terms: Sequence[tuple[Sequence[int], float]], retention: float = 1.0,
               rhs: Sequence[float] | float = 0.0) -> list[int]:
    """Cyclic storage balance ``level[t+1] = retention*level[t] + sum(coef*var[t]) + rhs[t]``.

    Rows are written as ``level[t+1] - retention*level[t] - sum(...) = rhs[t]``.
    """
    T = len(level)
    out = []
    for t in range(T):
        row: dict[int, float] = {}
        nxt = level[wrap(t, T)]
        row[nxt] = row.get(nxt, 0.0) + 1.0
        row[level[t]] = row.get(level[t], 0.0) - retention
        for handles, coef in terms:
            h = handles[t]
            row[h] = row.get(h, 0.0) - coef
        r = rhs if isinstance(rhs, (int, float)) else rhs[t]
        out.append(lp.add_constraint(row, EQ, r, tag=(zone, unit, label, t)))
    return out


def load_change(lp: LinearProgram, reg: VariableRegistry, zone: str, unit: str, label: str,
                tracked: Sequence[tuple[Sequence[int], float]], cost: float, T: int) -> None:
    """Ramp tracking ``s[t+1] = s[t] + LC+[t] - LC-[t]`` on a weighted sum ``s`` of variables.

    Skipped when the ramp cost is zero: free, costless ramp variables would
    not restrict anything.
    """
    if cost == 0.0 or T < 2:
        return
    up = reg.add_series(lp, zone, unit, "LC+", T, cost=cost)
    down = reg.add_series(lp, zone, unit, "LC-", T, cost=cost)
    for t in range(T):
        row: dict[int, float] = {}
        for handles, w in tracked:
            a, b = handles[wrap(t, T)], handles[t]
            row[a] = row.get(a, 0.0) + w
            row[b] = row.get(b, 0.0) - w
        row[up[t]] = -1.0
        row[down[t]] = 1.0
        lp.add_constraint(row, EQ, 0.0, tag=(zone, unit, label, t))
