"""Scenario-to-LP translation, one builder per technology family."""

from .assemble import BuildError, Model, assemble
from .heat import build_chp_system, build_cooling, build_heat_pump, build_hybrid_boiler
from .market import (CLEARING, StructuralInfeasibility, build_interconnectors,
                     build_market_clearing, flow_unit)
from .power import (build_battery, build_hydro, build_ptg, build_renewables, build_thermal,
                    unlimited_capacity)
from .registry import ROLES, FuelPrices, VariableRegistry
from .transport import build_transport

__all__ = [
    "BuildError", "Model", "assemble", "build_chp_system", "build_cooling", "build_heat_pump",
    "build_hybrid_boiler", "CLEARING", "StructuralInfeasibility", "build_interconnectors",
    "build_market_clearing", "flow_unit", "build_battery", "build_hydro", "build_ptg",
    "build_renewables", "build_thermal", "unlimited_capacity", "ROLES", "FuelPrices",
    "VariableRegistry", "build_transport",
]
