"""Cross-border flows and zonal market clearing."""

from __future__ import annotations

from ..lp import EQ, LinearProgram
from ..scenario import Scenario
from .registry import VariableRegistry

CLEARING = "wholesaleElectricity"


class StructuralInfeasibility(ValueError):
    """A zone has positive demand but nothing that could supply it."""

    def __init__(self, tags):
        self.tags = tuple(tags)
        super().__init__(f"structurally infeasible market clearing rows: {list(self.tags)[:10]}")


def flow_unit(from_zone: str, to_zone: str) -> str:
    return f"{from_zone}->{to_zone}"


def build_interconnectors(scenario: Scenario, registry: VariableRegistry,
                          lp: LinearProgram) -> None:
    """Directed NTC-limited flows; losses are charged on the importing side."""
    zones = {z.id for z in scenario.zones}
    T = scenario.horizon
    for ic in scenario.interconnectors:
        if ic.from_zone not in zones or ic.to_zone not in zones:
            continue
        unit = flow_unit(ic.from_zone, ic.to_zone)
        flow = registry.add_series(lp, ic.from_zone, unit, "FLOW", T, upper=ic.ntc)
        for t in range(T):
            registry.inject(ic.from_zone, t, flow[t], -1.0)
            registry.inject(ic.to_zone, t, flow[t], ic.transmission_efficiency)


def build_market_clearing(scenario: Scenario, registry: VariableRegistry,
                          lp: LinearProgram) -> dict[tuple[str, int], int]:
    """One balance row per zone and hour: supply minus consumption equals demand.

    Written this way round, the row's dual is the marginal cost of one more
    MWh of demand, i.e. the zonal price. Raises StructuralInfeasibility when
    a row with positive demand has no variable that can inject power.
    """
    handles: dict[tuple[str, int], int] = {}
    broken = []
    upper = lp.upper
    for z in scenario.zones:
        for t in range(scenario.horizon):
            row = registry.injections.get((z.id, t), {})
            demand = float(z.electricity_demand[t])
            tag = (z.id, CLEARING, t)
            if demand > 0 and not any(c > 0 and upper[h] > 0 for h, c in row.items()):
                broken.append(tag)
            handles[(z.id, t)] = lp.add_constraint(row, EQ, demand, tag=tag)
    if broken:
        raise StructuralInfeasibility(broken)
    return handles
