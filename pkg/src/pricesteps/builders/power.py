"""Power-sector technologies: renewables, thermal plants, hydro, power-to-gas, batteries."""

from __future__ import annotations

import math

import numpy as np

from ..lp import EQ, LE, LinearProgram
from ..scenario import Zone
from .common import continuity, load_change
from .registry import FuelPrices, VariableRegistry


def _horizon(zone: Zone) -> int:
    return len(zone.electricity_demand)


def build_renewables(zone: Zone, registry: VariableRegistry, lp: LinearProgram,
                     fuel: FuelPrices | None = None) -> None:
    """Generation plus curtailment within available capacity.

    The curtailment bonus is a credit: curtailed energy lowers the objective
    by ``curtailment_bonus`` per MWh, so the unit with the largest bonus is
    curtailed first.
    """
    T = _horizon(zone)
    for r in zone.renewables:
        registry.register_unit(zone.id, "renewables", r)
        gen = registry.add_series(lp, zone.id, r.id, "GEN", T, cost=r.variable_cost)
        cu = registry.add_series(lp, zone.id, r.id, "CU", T, cost=-r.curtailment_bonus)
        avail = r.availability * r.capacity
        for t in range(T):
            lp.add_constraint({gen[t]: 1.0, cu[t]: 1.0}, LE, float(avail[t]),
                              tag=(zone.id, r.id, "genLimitsRen", t))
            registry.inject(zone.id, t, gen[t], 1.0)


def unlimited_capacity(zone: Zone, export_ntc: float = 0.0) -> float:
    """Finite stand-in for a capacity declared unlimited.

    Ten times the largest load the zone could ever present: peak demand plus
    every consumer at full power plus all export capacity.
    """
    load = float(np.max(zone.electricity_demand, initial=0.0))
    load += sum(u.capacity for u in zone.ptg)
    load += sum(b.power_cap for b in zone.batteries)
    load += sum(float(np.max(h.pump_cap, initial=0.0)) for h in zone.hydro)
    load += sum(c.electric_backup_design_factor * c.chp_capacity for c in zone.chp_systems)
    load += sum(b.electric_cap for b in zone.hybrid_boilers)
    load += sum(h.hp_cap + h.backup_electric_cap for h in zone.heat_pumps)
    load += sum(o.capacity for o in zone.cooling)
    for v in zone.vehicles:
        env = (v.flexible_share * v.inflexible_charging
               + (1 - v.flexible_share) * v.max_flexible_charging) * v.market_share
        load += float(np.max(env, initial=0.0))
    load += export_ntc
    return 10.0 * max(load, 1.0)


def build_thermal(zone: Zone, registry: VariableRegistry, lp: LinearProgram,
                  fuel: FuelPrices, export_ntc: float = 0.0) -> None:
    T = _horizon(zone)
    for g in zone.thermal:
        registry.register_unit(zone.id, "thermal", g)
        price = fuel.imported if g.fuel_price is None else g.fuel_price
        cap = unlimited_capacity(zone, export_ntc) if math.isinf(g.capacity) else g.capacity
        gen = registry.add_series(lp, zone.id, g.id, "GEN", T, lower=g.min_generation,
                                  upper=g.availability * cap, cost=price / g.efficiency)
        for t in range(T):
            registry.inject(zone.id, t, gen[t], 1.0)
        load_change(lp, registry, zone.id, g.id, "genLoadChange", [(gen, 1.0)],
                    g.load_change_cost, T)


def build_hydro(zone: Zone, registry: VariableRegistry, lp: LinearProgram,
                fuel: FuelPrices | None = None) -> None:
    """Equivalent-reservoir hydro: main and pumped reservoirs with spillage.

    Pumped water enters both reservoir balances and pumped-turbine output is
    drawn from both, as in the two-reservoir formulation.
    """
    T = _horizon(zone)
    for u in zone.hydro:
        registry.register_unit(zone.id, "hydro", u)
        z = zone.id
        turb = registry.add_series(lp, z, u.id, "GEN_T", T, upper=u.turbine_cap)
        pt = registry.add_series(lp, z, u.id, "GEN_PT", T, upper=u.pumped_turbine_cap)
        pump = registry.add_series(lp, z, u.id, "CON", T, upper=u.pump_cap)
        s = registry.add_series(lp, z, u.id, "S", T, upper=u.reservoir_cap_main)
        sp = registry.add_series(lp, z, u.id, "S_P", T, upper=u.reservoir_cap_pumped)
        spill = registry.add_series(lp, z, u.id, "SP", T)
        spill_p = registry.add_series(lp, z, u.id, "SP_P", T)
        eta = u.pump_efficiency
        continuity(lp, z, u.id, "hydroStorageBalance", s,
                   [(turb, -1.0), (pt, -1.0), (pump, eta), (spill, -1.0), (spill_p, -1.0)],
                   rhs=u.inflow_main)
        continuity(lp, z, u.id, "hydroPumpedStorageBalance", sp,
                   [(pt, -1.0), (pump, eta), (spill_p, -1.0)], rhs=u.inflow_pumped)
        for t in range(T):
            registry.inject(z, t, turb[t], 1.0)
            registry.inject(z, t, pt[t], 1.0)
            registry.inject(z, t, pump[t], -1.0)


def build_ptg(zone: Zone, registry: VariableRegistry, lp: LinearProgram,
              fuel: FuelPrices) -> None:
    """Electrolysis plus methanation, credited at the domestic methane value."""
    T = _horizon(zone)
    for l in zone.ptg:
        registry.register_unit(zone.id, "ptg", l)
        credit = fuel.domestic if l.fuel_credit is None else l.fuel_credit
        con = registry.add_series(lp, zone.id, l.id, "CON", T, upper=l.capacity)
        gas = registry.add_series(lp, zone.id, l.id, "y_GEN", T, cost=-credit)
        for t in range(T):
            lp.add_constraint({gas[t]: 1.0, con[t]: -l.conversion_factor}, EQ, 0.0,
                              tag=(zone.id, l.id, "powerToFuelLimits", t))
            registry.inject(zone.id, t, con[t], -1.0)
        load_change(lp, registry, zone.id, l.id, "conLoadChange", [(con, 1.0)],
                    l.load_change_cost, T)


def build_battery(zone: Zone, registry: VariableRegistry, lp: LinearProgram,
                  fuel: FuelPrices | None = None) -> None:
    """Battery with cyclic state of charge; ramp costs act on net injection OUT - IN."""
    T = _horizon(zone)
    for a in zone.batteries:
        registry.register_unit(zone.id, "batteries", a)
        z = zone.id
        inp = registry.add_series(lp, z, a.id, "IN", T, upper=a.power_cap)
        out = registry.add_series(lp, z, a.id, "OUT", T, upper=a.power_cap)
        lvl = registry.add_series(lp, z, a.id, "S", T, upper=a.energy_cap)
        continuity(lp, z, a.id, "electricityStorageContinuity", lvl,
                   [(inp, a.eta_in), (out, -1.0 / a.eta_out)],
                   retention=1.0 - a.loss_factor, rhs=-a.self_discharge)
        for t in range(T):
            registry.inject(z, t, out[t], 1.0)
            registry.inject(z, t, inp[t], -1.0)
        load_change(lp, registry, z, a.id, "storageLoadChange", [(out, 1.0), (inp, -1.0)],
                    a.load_change_cost, T)
