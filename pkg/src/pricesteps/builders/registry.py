"""Lookup table from (zone, unit, role, hour) to LP variable handles."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from ..lp import LinearProgram

ROLES = (
    "GEN", "CU", "CON", "CON_HP", "CON_BU", "GEN_T", "GEN_PT", "S", "S_P", "SP", "SP_P",
    "IN", "OUT", "LC+", "LC-", "q_CHP", "q_IN", "q_OUT", "q_S", "y_CB", "y_CON", "y_GEN",
    "z_EL", "z_ICE", "FLOW",
)


@dataclass(frozen=True)
class FuelPrices:
    """Methane prices (EUR/MWh_th): import, and domestic opportunity value."""

    imported: float
    domestic: float


class VariableRegistry:
    """Keeps every decision variable addressable by (zone, unit, role, t).

    Builders also record each variable's coefficient in its zone's power
    balance here, so market clearing can be assembled after all technologies.
    """

    def __init__(self) -> None:
        self._handles: dict[tuple, int] = {}
        self._series: dict[tuple, list[int]] = defaultdict(list)
        self.injections: dict[tuple[str, int], dict[int, float]] = defaultdict(dict)
        self.units: dict[tuple[str, str], tuple[str, object]] = {}

    def __len__(self) -> int:
        return len(self._handles)

    def __contains__(self, key) -> bool:
        return key in self._handles

    def register_unit(self, zone: str, kind: str, unit) -> None:
        key = (zone, unit.id)
        if key in self.units:
            raise KeyError(f"unit {unit.id!r} registered twice in zone {zone}")
        self.units[key] = (kind, unit)

    def add(self, lp: LinearProgram, zone: str, unit: str, role: str, t: int,
            lower: float = 0.0, upper: float = math.inf, cost: float = 0.0) -> int:
        if role not in ROLES:
            raise ValueError(f"unknown variable role {role!r}")
        key = (zone, unit, role, t)
        if key in self._handles:
            raise KeyError(f"registry collision for {key!r}")
        h = lp.add_variable(lower, upper, cost, tag=key)
        self._handles[key] = h
        self._series[(zone, unit, role)].append(h)
        return h

    def add_series(self, lp: LinearProgram, zone: str, unit: str, role: str, T: int,
                   lower=0.0, upper=math.inf, cost=0.0) -> list[int]:
        """One variable per hour; bounds and cost may be scalars or length-T arrays."""
        lo = np.broadcast_to(np.asarray(lower, dtype=float), (T,))
        hi = np.broadcast_to(np.asarray(upper, dtype=float), (T,))
        c = np.broadcast_to(np.asarray(cost, dtype=float), (T,))
        return [self.add(lp, zone, unit, role, t, lo[t], hi[t], c[t]) for t in range(T)]

    def get(self, zone: str, unit: str, role: str, t: int) -> int:
        return self._handles[(zone, unit, role, t)]

    def series(self, zone: str, unit: str, role: str) -> np.ndarray:
        """Handles of a role for all hours (empty if the unit has no such variable)."""
        return np.asarray(self._series.get((zone, unit, role), ()), dtype=np.int64)

    def roles(self, zone: str, unit: str) -> list[str]:
        return [r for (z, u, r) in self._series if z == zone and u == unit]

    def inject(self, zone: str, t: int, handle: int, coef: float) -> None:
        """Record that ``handle`` adds ``coef`` MW to zone's supply side in hour t."""
        row = self.injections[(zone, t)]
        row[handle] = row.get(handle, 0.0) + coef

    def items(self):
        return self._handles.items()
