"""Whole-scenario LP assembly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..lp import LinearProgram
from ..scenario import Scenario, validate
from .heat import build_chp_system, build_cooling, build_heat_pump, build_hybrid_boiler
from .market import build_interconnectors, build_market_clearing
from .power import build_battery, build_hydro, build_ptg, build_renewables, build_thermal
from .registry import FuelPrices, VariableRegistry
from .transport import build_transport


class BuildError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("scenario failed validation:\n  " + "\n  ".join(self.violations))


@dataclass
class Model:
    """Assembled LP with its variable registry and market-clearing row handles."""

    lp: LinearProgram
    registry: VariableRegistry
    clearing: dict[tuple[str, int], int]
    scenario: Scenario

    def __iter__(self):
        # allows ``lp, reg, clearing = assemble(s)``
        return iter((self.lp, self.registry, self.clearing))

    def clearing_rows(self, zone: str) -> np.ndarray:
        return np.array([self.clearing[(zone, t)] for t in range(self.scenario.horizon)],
                        dtype=np.int64)


def assemble(scenario: Scenario, check: bool = True) -> Model:
    """Build the complete dispatch LP.

    Variables are created zone by zone, unit by unit, role by role, hour by
    hour, so the ordering is deterministic. Interconnector flows follow the
    zone blocks and the clearing rows come last.
    """
    if check:
        problems = validate(scenario)
        if problems:
            raise BuildError(problems)
    lp = LinearProgram(name=scenario.name or "dispatch")
    reg = VariableRegistry()
    fuel = FuelPrices(scenario.fuel_price_import, scenario.fuel_price_domestic)
    exports: dict[str, float] = {}
    for ic in scenario.interconnectors:
        exports[ic.from_zone] = exports.get(ic.from_zone, 0.0) + float(np.max(ic.ntc, initial=0.0))
    for zone in scenario.zones:
        build_renewables(zone, reg, lp, fuel)
        build_thermal(zone, reg, lp, fuel, export_ntc=exports.get(zone.id, 0.0))
        build_hydro(zone, reg, lp, fuel)
        build_ptg(zone, reg, lp, fuel)
        build_battery(zone, reg, lp, fuel)
        build_chp_system(zone, reg, lp, fuel)
        build_hybrid_boiler(zone, reg, lp, fuel)
        build_heat_pump(zone, reg, lp, fuel)
        build_cooling(zone, reg, lp, fuel)
        build_transport(zone, reg, lp, fuel)
    build_interconnectors(scenario, reg, lp)
    clearing = build_market_clearing(scenario, reg, lp)
    return Model(lp=lp, registry=reg, clearing=clearing, scenario=scenario)
