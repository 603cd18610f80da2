"""Road transport: battery-electric and plug-in hybrid fleets."""

from __future__ import annotations

import numpy as np

from ..lp import EQ, LinearProgram
from ..scenario import Zone
from .common import continuity
from .registry import FuelPrices, VariableRegistry


def build_transport(zone: Zone, registry: VariableRegistry, lp: LinearProgram,
                    fuel: FuelPrices) -> None:
    """Driving split, charging envelope, state of charge and engine fuel per fleet.

    The envelopes follow the published inequalities literally: with share
    ``FS`` the charging lower bound is ``FS * X_IC * phi`` and the flexible
    headroom is ``(1 - FS) * X_FC * phi``; the state-of-charge window
    scales with ``1 - FS``.
    """
    T = len(zone.electricity_demand)
    for v in zone.vehicles:
        registry.register_unit(zone.id, "vehicles", v)
        z, phi, fs = zone.id, v.market_share, v.flexible_share
        drive = zone.market("road_markets", v.road_market).demand
        zmax = v.max_electric_distance
        ice_cost = fuel.imported if v.ice_cost is None else v.ice_cost

        z_el = registry.add_series(lp, z, v.id, "z_EL", T, lower=fs * zmax * phi, upper=zmax * phi)
        ice_lo = np.maximum(fs * (drive - zmax) * phi, 0.0)
        z_ice = registry.add_series(lp, z, v.id, "z_ICE", T, lower=ice_lo,
                                    upper=(drive - fs * zmax) * phi)
        fixed = fs * v.inflexible_charging * phi
        con = registry.add_series(lp, z, v.id, "CON", T, lower=fixed,
                                  upper=fixed + (1 - fs) * v.max_flexible_charging * phi)
        soc = registry.add_series(lp, z, v.id, "S", T, lower=(1 - fs) * v.soc_min * phi,
                                  upper=(1 - fs) * v.soc_max * phi)
        y = registry.add_series(lp, z, v.id, "y_CON", T, cost=ice_cost)
        for t in range(T):
            lp.add_constraint({z_ice[t]: 1.0, z_el[t]: 1.0}, EQ, float(phi * drive[t]),
                              tag=(z, v.id, "vehicleDemandCoverage", t))
            lp.add_constraint({y[t]: 1.0, z_ice[t]: -v.fuel_per_km}, EQ, 0.0,
                              tag=(z, v.id, "fuelConsumptionVehicle", t))
            registry.inject(z, t, con[t], -1.0)
        rhs = (v.electricity_per_km * fs * zmax * phi
               - v.charging_efficiency * fs * v.inflexible_charging * phi)
        continuity(lp, z, v.id, "vehicleStateOfCharge", soc,
                   [(z_el, -v.electricity_per_km), (con, v.charging_efficiency)], rhs=rhs)
