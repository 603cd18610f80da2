"""Heating and cooling systems: multivalent CHP, hybrid boilers, heat pumps, air conditioning."""

from __future__ import annotations

import numpy as np

from ..lp import EQ, LE, LinearProgram
from ..scenario import ThermalStorageParams, Zone
from .common import continuity, load_change
from .registry import FuelPrices, VariableRegistry


def _horizon(zone: Zone) -> int:
    return len(zone.electricity_demand)


def _thermal_storage(lp, reg, zone_id, unit_id, label, st: ThermalStorageParams | None, T,
                     in_upper=np.inf):
    """Storage level/input/output variables and cyclic continuity; (None, None) without storage."""
    if st is None:
        return None, None
    q_in = reg.add_series(lp, zone_id, unit_id, "q_IN", T, upper=np.minimum(in_upper, st.power_cap))
    q_out = reg.add_series(lp, zone_id, unit_id, "q_OUT", T, upper=st.power_cap)
    lvl = reg.add_series(lp, zone_id, unit_id, "q_S", T, upper=st.energy_cap)
    continuity(lp, zone_id, unit_id, label, lvl, [(q_in, st.eta_in), (q_out, -1.0 / st.eta_out)],
               retention=1.0 - st.loss_factor, rhs=-st.self_discharge)
    return q_in, q_out


def _balance(lp, zone_id, unit_id, label, T, lhs, terms, q_in, q_out):
    """``lhs[t] = sum(coef[t] * var[t]) + q_out[t] - q_in[t]``."""
    for t in range(T):
        row: dict[int, float] = {}
        for handles, coef in terms:
            c = coef if np.isscalar(coef) else coef[t]
            row[handles[t]] = row.get(handles[t], 0.0) + float(c)
        if q_in is not None:
            row[q_out[t]] = 1.0
            row[q_in[t]] = -1.0
        lp.add_constraint(row, EQ, float(lhs[t]), tag=(zone_id, unit_id, label, t))


def build_chp_system(zone: Zone, registry: VariableRegistry, lp: LinearProgram,
                     fuel: FuelPrices) -> None:
    """CHP unit with fuel boiler, electric backup and thermal storage serving one heat market."""
    T = _horizon(zone)
    P = fuel.imported
    for g in zone.chp_systems:
        registry.register_unit(zone.id, "chp_systems", g)
        z, cap = zone.id, g.chp_capacity
        c_chp = P * g.power_loss_factor if g.heat_extraction_cost is None else g.heat_extraction_cost
        c_cb = P if g.boiler_fuel_cost is None else g.boiler_fuel_cost
        gen = registry.add_series(lp, z, g.id, "GEN", T, cost=P / g.electrical_efficiency)
        q = registry.add_series(lp, z, g.id, "q_CHP", T, cost=c_chp)
        y_cb = registry.add_series(lp, z, g.id, "y_CB", T,
                                   upper=g.boiler_design_factor * cap / g.boiler_efficiency,
                                   cost=c_cb)
        con = registry.add_series(lp, z, g.id, "CON", T,
                                  upper=g.electric_backup_design_factor * cap)
        q_in, q_out = _thermal_storage(lp, registry, z, g.id, "thermalStorageContinuity",
                                       g.storage, T)
        avail = g.availability * cap
        for t in range(T):
            lp.add_constraint({gen[t]: 1.0, q[t]: g.power_loss_factor}, LE, float(avail[t]),
                              tag=(z, g.id, "chpLimits1", t))
            lp.add_constraint({q[t]: g.power_to_heat_ratio, gen[t]: -1.0}, LE, 0.0,
                              tag=(z, g.id, "chpLimits2", t))
            registry.inject(z, t, gen[t], 1.0)
            registry.inject(z, t, con[t], -1.0)
        demand = zone.market("heat_markets", g.heat_market).demand
        lhs = g.solar_thermal_factor * demand / (1.0 - g.network_loss)
        _balance(lp, z, g.id, "chpDemandCoverage", T, lhs,
                 [(q, 1.0), (y_cb, g.boiler_efficiency), (con, g.electric_backup_efficiency)],
                 q_in, q_out)
        load_change(lp, registry, z, g.id, "chpLoadChange",
                    [(gen, 1.0), (q, g.power_loss_factor)], g.load_change_cost, T)


def build_hybrid_boiler(zone: Zone, registry: VariableRegistry, lp: LinearProgram,
                        fuel: FuelPrices) -> None:
    T = _horizon(zone)
    for b in zone.hybrid_boilers:
        registry.register_unit(zone.id, "hybrid_boilers", b)
        z = zone.id
        c_cb = fuel.imported if b.boiler_fuel_cost is None else b.boiler_fuel_cost
        y_cb = registry.add_series(lp, z, b.id, "y_CB", T,
                                   upper=b.boiler_cap / b.boiler_efficiency, cost=c_cb)
        con = registry.add_series(lp, z, b.id, "CON", T, upper=b.electric_cap)
        for t in range(T):
            registry.inject(z, t, con[t], -1.0)
        demand = zone.market("heat_markets", b.heat_market).demand
        lhs = b.solar_thermal_factor * demand / (1.0 - b.network_loss)
        _balance(lp, z, b.id, "hbDemandCoverage", T, lhs,
                 [(y_cb, b.boiler_efficiency), (con, b.electric_efficiency)], None, None)


def build_heat_pump(zone: Zone, registry: VariableRegistry, lp: LinearProgram,
                    fuel: FuelPrices) -> None:
    """Heat pump with hourly COP, electric and fuel backup, and thermal storage.

    Storage charging is limited to the heat pump's own output; the storage
    balance reuses the CHP thermal-storage form.
    """
    T = _horizon(zone)
    for h in zone.heat_pumps:
        registry.register_unit(zone.id, "heat_pumps", h)
        z = zone.id
        c_fuel = fuel.imported if h.backup_fuel_cost is None else h.backup_fuel_cost
        hp = registry.add_series(lp, z, h.id, "CON_HP", T, upper=h.hp_cap)
        bu = registry.add_series(lp, z, h.id, "CON_BU", T, upper=h.backup_electric_cap)
        total = registry.add_series(lp, z, h.id, "CON", T)
        y_fuel = registry.add_series(lp, z, h.id, "y_CON", T,
                                     upper=h.backup_fuel_cap / h.backup_fuel_efficiency,
                                     cost=c_fuel)
        for t in range(T):
            lp.add_constraint({total[t]: 1.0, hp[t]: -1.0, bu[t]: -1.0}, EQ, 0.0,
                              tag=(z, h.id, "heatPumpConsumption", t))
            registry.inject(z, t, total[t], -1.0)
        q_in, q_out = _thermal_storage(lp, registry, z, h.id, "thermalStorageContinuity",
                                       h.storage, T)
        if q_in is not None:
            for t in range(T):
                lp.add_constraint({q_in[t]: 1.0, hp[t]: -float(h.cop_profile[t])}, LE, 0.0,
                                  tag=(z, h.id, "heatPumpStorageInput", t))
        demand = zone.market("heat_markets", h.heat_market).demand
        lhs = h.solar_thermal_factor * demand
        _balance(lp, z, h.id, "heatPumpDemandCoverage", T, lhs,
                 [(hp, h.cop_profile), (bu, h.backup_electric_efficiency),
                  (y_fuel, h.backup_fuel_efficiency)], q_in, q_out)


def build_cooling(zone: Zone, registry: VariableRegistry, lp: LinearProgram,
                  fuel: FuelPrices | None = None) -> None:
    T = _horizon(zone)
    for o in zone.cooling:
        registry.register_unit(zone.id, "cooling", o)
        z = zone.id
        con = registry.add_series(lp, z, o.id, "CON", T, upper=o.capacity)
        for t in range(T):
            registry.inject(z, t, con[t], -1.0)
        q_in, q_out = _thermal_storage(lp, registry, z, o.id, "thermalStorageContinuityAirCond",
                                       o.storage, T)
        demand = zone.market("cooling_markets", o.cooling_market).demand
        _balance(lp, z, o.id, "coolingDemandCoverage", T, demand,
                 [(con, o.electric_efficiency)], q_in, q_out)
