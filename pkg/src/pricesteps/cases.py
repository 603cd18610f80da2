"""Bundled desk-scale scenarios.

Each case adds one technology to a renewable + OCGT base system so that a
single price-setting mechanism becomes visible in the duration curve, then
two combined cases gather everything (one zone, and two coupled zones).
Profiles are synthetic and fully determined by fixed seeds.
"""

from __future__ import annotations

import dataclasses
import math
from pathlib import Path
from typing import Callable

import numpy as np

from .scenario import (BatteryUnit, ChpSystem, CoolingSystem, HeatPumpSystem, HybridBoilerSystem,
                       HydroSystem, Interconnector, Market, PowerToGasUnit, RenewableUnit,
                       Scenario, ThermalStorageParams, ThermalUnit, VehicleFleet, Zone,
                       save_scenario)

P_IMPORT = 119.2
P_DOMESTIC = 114.0
DEFAULT_HORIZON = 168
SEED = 20_500

SOLAR_BONUS, ONSHORE_BONUS, OFFSHORE_BONUS = 9e-6, 1e-5, 8e-6
ONSHORE_COST = 4.58


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _smooth_noise(rng, T, span):
    """AR(1)-style noise in roughly [-1, 1] with correlation length ``span`` hours."""
    a = math.exp(-1.0 / span)
    e = rng.normal(size=T + 48)
    out = np.empty_like(e)
    out[0] = e[0]
    for t in range(1, len(e)):
        out[t] = a * out[t - 1] + math.sqrt(1 - a * a) * e[t]
    return np.tanh(out[48:] / 1.5)


class _Profiles:
    """Named hourly profiles collected into the scenario's time-series store."""

    def __init__(self, T: int, seed: int):
        self.T = T
        self.rng = np.random.default_rng(seed)
        self.store: dict[str, np.ndarray] = {}
        self.hour = np.arange(T)
        self.hod = self.hour % 24

    def add(self, name: str, values) -> np.ndarray:
        arr = _frozen(np.broadcast_to(np.asarray(values, dtype=float), (self.T,)))
        self.store[name] = arr
        return arr

    def demand(self, name, mean, swing, noise):
        d = mean + swing * np.sin(2 * np.pi * (self.hod - 9) / 24) + self.rng.normal(0, noise, self.T)
        return self.add(name, np.round(np.maximum(d, 0.0), 3))

    def solar(self, name):
        day = self.hour // 24
        clouds = 0.35 + 0.65 * self.rng.random(day.max() + 1)
        shape = np.clip(np.sin(np.pi * (self.hod - 6) / 12), 0, None) ** 1.3
        return self.add(name, np.round(np.clip(shape * clouds[day], 0, 1), 4))

    def wind(self, name, mean, spread, span):
        w = mean + spread * _smooth_noise(self.rng, self.T, span)
        return self.add(name, np.round(np.clip(w, 0.0, 1.0), 4))


def _res(p: _Profiles, prefix: str = "", solar=80.0, onshore=70.0, offshore=25.0):
    return (
        RenewableUnit(f"{prefix}solar", solar, p.solar(f"{prefix}solar_av"), 0.0, SOLAR_BONUS, "solar"),
        RenewableUnit(f"{prefix}wind_onshore", onshore, p.wind(f"{prefix}onshore_av", 0.35, 0.45, 10),
                      ONSHORE_COST, ONSHORE_BONUS, "wind_onshore"),
        RenewableUnit(f"{prefix}wind_offshore", offshore, p.wind(f"{prefix}offshore_av", 0.5, 0.4, 16),
                      0.0, OFFSHORE_BONUS, "wind_offshore"),
    )


def _ocgt(lc=4.8, uid="ocgt") -> ThermalUnit:
    return ThermalUnit(uid, math.inf, 0.40, _frozen(np.ones(1)), lc, 0.0, None, "ocgt")


def _fix(unit, T):
    """Expand placeholder length-1 profiles and omitted defaults to the horizon."""
    kw = {}
    for f in dataclasses.fields(unit):
        v = getattr(unit, f.name)
        if f.metadata.get("profile") and v is None:
            kw[f.name] = _frozen(np.full(T, f.metadata["default"]))
        elif f.metadata.get("profile") and isinstance(v, np.ndarray) and len(v) == 1 and T != 1:
            kw[f.name] = _frozen(np.full(T, v[0]))
    return dataclasses.replace(unit, **kw) if kw else unit


def _flat(T, v=1.0):
    return _frozen(np.full(T, v))


def _scenario(name, p: _Profiles, zones, expected, interconnectors=()):
    zs = []
    for z in zones:
        kw = {}
        for f in dataclasses.fields(z):
            v = getattr(z, f.name)
            if isinstance(v, tuple):
                kw[f.name] = tuple(_fix(u, p.T) for u in v)
        zs.append(dataclasses.replace(z, **kw))
    return Scenario(horizon=p.T, fuel_price_import=P_IMPORT, fuel_price_domestic=P_DOMESTIC,
                    zones=tuple(zs), interconnectors=tuple(interconnectors),
                    timeseries=dict(p.store), name=name, expected_steps=tuple(expected))


def _base(T, seed=SEED):
    p = _Profiles(T, seed)
    demand = p.demand("demand", 65.0, 12.0, 3.0)
    return p, demand, _res(p)


OCGT_STEPS = ("thermal:ocgt", "thermal:ocgt+ramp", "thermal:ocgt-ramp")


def res_ocgt(T: int = DEFAULT_HORIZON) -> Scenario:
    p, demand, res = _base(T)
    zone = Zone("DE", demand, renewables=res, thermal=(_ocgt(),))
    return _scenario("res_ocgt", p, [zone], OCGT_STEPS + ("renewable:wind_onshore",))


def ptg(T: int = DEFAULT_HORIZON) -> Scenario:
    p, demand, res = _base(T)
    unit = PowerToGasUnit("ptg", 25.0, 0.5925, 1.0, None, "ptg")
    zone = Zone("DE", demand, renewables=res, thermal=(_ocgt(),), ptg=(unit,))
    return _scenario("ptg", p, [zone], OCGT_STEPS + ("ptg:ptg", "ptg:ptg+ramp", "ptg:ptg-ramp"))


def battery(T: int = DEFAULT_HORIZON) -> Scenario:
    p, demand, res = _base(T)
    unit = BatteryUnit("battery", 8.0, 48.0, math.sqrt(0.92), math.sqrt(0.92), 1.39e-7, 0.0, 0.1,
                       "battery")
    zone = Zone("DE", demand, renewables=res, thermal=(_ocgt(),), batteries=(unit,))
    return _scenario("battery", p, [zone], ("thermal:ocgt",))


def hydro(T: int = DEFAULT_HORIZON) -> Scenario:
    """Pure pumped storage; OCGT ramp cost is zero so the water value is exactly 298."""
    p, demand, res = _base(T)
    unit = HydroSystem("phs", 0.73, 400.0, 400.0,
                       turbine_cap=_flat(1, 0.0), pumped_turbine_cap=_flat(1, 10.0),
                       pump_cap=_flat(1, 12.0), inflow_main=_flat(1, 0.0),
                       inflow_pumped=_flat(1, 0.0))
    zone = Zone("DE", demand, renewables=res, thermal=(_ocgt(lc=0.0),), hydro=(unit,))
    return _scenario("hydro", p, [zone], ("thermal:ocgt", "hydro:phs"))


def _vehicle_units(p: _Profiles):
    road = p.add("road_demand", np.round(2000 + 1500 * np.clip(np.sin(np.pi * (p.hod - 6) / 14), 0, None), 1))
    bev = VehicleFleet("bev", "road", 0.4, 0.2, 0.95, 0.0002, 0.0,
                       max_electric_distance=road,
                       inflexible_charging=p.add("bev_ic", 0.15 + 0.1 * (p.hod >= 17)),
                       max_flexible_charging=_flat(p.T, 1.0),
                       soc_min=_flat(p.T, 1.0), soc_max=_flat(p.T, 20.0))
    phev = VehicleFleet("phev", "road", 0.3, 0.6, 0.95, 0.0002, 0.00055,
                        max_electric_distance=p.add("phev_zmax", 0.6 * road),
                        inflexible_charging=p.add("phev_ic", 0.1 + 0.05 * (p.hod >= 17)),
                        max_flexible_charging=_flat(p.T, 0.8),
                        soc_min=_flat(p.T, 0.5), soc_max=_flat(p.T, 10.0))
    return Market("road", road), (bev, phev)


def vehicles(T: int = DEFAULT_HORIZON) -> Scenario:
    p, demand, res = _base(T)
    market, fleets = _vehicle_units(p)
    zone = Zone("DE", demand, renewables=res, thermal=(_ocgt(),), vehicles=fleets,
                road_markets=(market,))
    return _scenario("vehicles", p, [zone], OCGT_STEPS)


def _cooling_units(p: _Profiles):
    cool = p.add("cooling_demand", np.round(10 + 8 * np.clip(np.sin(np.pi * (p.hod - 8) / 12), 0, None), 3))
    eff = p.add("cooling_eer", np.round(3.0 - 0.5 * np.clip(np.sin(np.pi * (p.hod - 8) / 12), 0, None), 4))
    unit = CoolingSystem("aircon", "cooling", 8.0, eff,
                         ThermalStorageParams(12 * 8.0, 1.0, 1.0, 0.1, 0.0, math.inf))
    return Market("cooling", cool), unit


def cooling(T: int = DEFAULT_HORIZON) -> Scenario:
    p, demand, res = _base(T)
    market, unit = _cooling_units(p)
    zone = Zone("DE", demand, renewables=res, thermal=(_ocgt(),), cooling=(unit,),
                cooling_markets=(market,))
    return _scenario("cooling", p, [zone], OCGT_STEPS)


def _heat_pump_units(p: _Profiles):
    heat = p.add("hp_heat_demand", np.round(30 + 10 * np.cos(2 * np.pi * (p.hod - 4) / 24), 3))
    cop = p.add("hp_cop", np.round(3.0 + 0.6 * np.sin(2 * np.pi * (p.hod - 9) / 24), 4))
    unit = HeatPumpSystem("heat_pump", "hp_heat", 14.0, cop, 0.99, 0.90, 5.0, 40.0, None,
                          ThermalStorageParams(6 * 10.0, 0.99, 0.99, 0.0021, 0.0, 10.0))
    return Market("hp_heat", heat), unit


def heat_pumps(T: int = DEFAULT_HORIZON) -> Scenario:
    p, demand, res = _base(T)
    market, unit = _heat_pump_units(p)
    zone = Zone("DE", demand, renewables=res, thermal=(_ocgt(),), heat_pumps=(unit,),
                heat_markets=(market,))
    return _scenario("heat_pumps", p, [zone], ("thermal:ocgt",))


def _hybrid_boiler_units(p: _Profiles):
    heat = p.add("hb_heat_demand", np.round(40 + 8 * np.cos(2 * np.pi * (p.hod - 4) / 24), 3))
    hb90 = HybridBoilerSystem("hb_090", "hb_heat", 0.90, 0.99, 60.0, 10.0)
    hb93 = HybridBoilerSystem("hb_093", "hb_heat", 0.93, 0.99, 60.0, 10.0)
    return Market("hb_heat", heat), (hb90, hb93)


def hybrid_boilers(T: int = DEFAULT_HORIZON) -> Scenario:
    p, demand, res = _base(T)
    market, units = _hybrid_boiler_units(p)
    zone = Zone("DE", demand, renewables=res, thermal=(_ocgt(),), hybrid_boilers=units,
                heat_markets=(market,))
    return _scenario("hybrid_boilers", p, [zone],
                     OCGT_STEPS + ("hybrid_boiler:hb_090", "hybrid_boiler:hb_093"))


def _chp_units(p: _Profiles, scale=1.0, prefix=""):
    heat = p.add(f"{prefix}chp_heat_demand",
                 np.round(scale * (18 + 6 * np.cos(2 * np.pi * (p.hod - 4) / 24)), 3))
    ccgt = ChpSystem(f"{prefix}chp_ccgt", f"{prefix}chp_heat", scale * 20.0, 0.56, 1.4, 0.1, 0.93,
                     design_ratio_chp=0.33, boiler_design_factor=2.0,
                     electric_backup_design_factor=0.8, electric_backup_efficiency=_flat(p.T, 0.99),
                     load_change_cost=4.8,
                     storage=ThermalStorageParams(scale * 4 * 14.0, 0.99, 0.99, 0.0021, 0.0,
                                                  scale * 14.0),
                     technology="chp_ccgt")
    return Market(f"{prefix}chp_heat", heat), ccgt


def chp(T: int = DEFAULT_HORIZON) -> Scenario:
    p, demand, res = _base(T)
    market, unit = _chp_units(p)
    zone = Zone("DE", demand, renewables=res, thermal=(_ocgt(),), chp_systems=(unit,),
                heat_markets=(market,))
    return _scenario("chp", p, [zone], ("chp_boiler:chp_ccgt", "chp_backup:chp_ccgt"))


# Installed capacities of the German market area in MW (CHP split by type).
DE_CAPACITY = {
    "solar": 174_400.0, "wind_onshore": 162_300.0, "wind_offshore": 36_700.0,
    "hydro": 9_200.0, "chp": 40_300.0, "ptg": 27_100.0, "battery": 6_500.0,
}


def _all_zone(p: _Profiles, zid: str, scale: float, prefix: str = "") -> Zone:
    """A zone carrying every technology; ``scale`` maps the reference fleet to MW."""
    k = scale
    demand = p.demand(f"{prefix}demand", 52_000 * k, 9_000 * k, 1_200 * k)
    res = (
        RenewableUnit(f"{prefix}solar", DE_CAPACITY["solar"] * k, p.solar(f"{prefix}solar_av"),
                      0.0, SOLAR_BONUS, "solar"),
        RenewableUnit(f"{prefix}wind_onshore", DE_CAPACITY["wind_onshore"] * k,
                      p.wind(f"{prefix}onshore_av", 0.28, 0.3, 10), ONSHORE_COST, ONSHORE_BONUS,
                      "wind_onshore"),
        RenewableUnit(f"{prefix}wind_offshore", DE_CAPACITY["wind_offshore"] * k,
                      p.wind(f"{prefix}offshore_av", 0.45, 0.4, 16), 0.0, OFFSHORE_BONUS,
                      "wind_offshore"),
    )
    hyd = DE_CAPACITY["hydro"] * k
    hydro_u = HydroSystem(f"{prefix}hydro", 0.73, 2_000 * k * 24, 6 * hyd * 0.7,
                          turbine_cap=_flat(p.T, 0.3 * hyd), pumped_turbine_cap=_flat(p.T, 0.7 * hyd),
                          pump_cap=_flat(p.T, 0.7 * hyd),
                          inflow_main=p.add(f"{prefix}hydro_inflow",
                                            np.round(0.12 * hyd * (1 + 0.2 * _smooth_noise(p.rng, p.T, 24)), 3)),
                          inflow_pumped=_flat(p.T, 0.0))
    bat = DE_CAPACITY["battery"] * k
    battery_u = BatteryUnit(f"{prefix}battery", bat, 6 * bat, math.sqrt(0.92), math.sqrt(0.92),
                            1.39e-7, 0.0, 0.1, "battery")
    ptg_u = PowerToGasUnit(f"{prefix}ptg", DE_CAPACITY["ptg"] * k, 0.5925, 1.0, None, "ptg")
    chp_cap = DE_CAPACITY["chp"] * k
    heat_d = p.add(f"{prefix}dh_heat_demand",
                   np.round(chp_cap * (0.55 + 0.15 * np.cos(2 * np.pi * (p.hod - 4) / 24)), 3))
    chps = []
    for uid, share, eta, ph, pl, pchp, eta_cb, pcon, backup in (
            ("chp_ocgt", 0.25, 0.42, 0.86, 0.01, 0.33, 0.90, 0.8, None),
            ("chp_small", 0.15, 0.46, 1.10, 0.00, 0.20, 0.93, 1.0, None),
            ("chp_ccgt", 0.60, 0.56, 1.40, 0.10, 0.33, 0.93, 1.9, 0.99)):
        cap = share * chp_cap
        # electric boiler for CCGT systems, heat pumps (COP 3.3 to 4) elsewhere
        eff = (p.add(f"{prefix}{uid}_cop", np.round(3.65 + 0.35 * np.sin(2 * np.pi * (p.hod - 9) / 24), 4))
               if backup is None else _flat(p.T, backup))
        chps.append(ChpSystem(
            f"{prefix}{uid}", f"{prefix}dh_{uid}", cap, eta, ph, pl, eta_cb,
            design_ratio_chp=pchp, boiler_design_factor=2.0, electric_backup_design_factor=pcon,
            electric_backup_efficiency=eff, load_change_cost=4.8,
            storage=ThermalStorageParams(8 * cap / ph, 0.99, 0.99, 0.0021, 0.0, cap / ph),
            network_loss=0.05, technology=uid))
    heat_markets = [Market(f"{prefix}dh_{u[0]}", heat_d) for u in
                    (("chp_ocgt",), ("chp_small",), ("chp_ccgt",))]
    # scale each district-heating market with its CHP share
    heat_markets = [
        Market(m.id, p.add(f"{m.id}_demand", np.round(heat_d * s, 3)))
        for m, s in zip(heat_markets, (0.25, 0.15, 0.60))
    ]
    hb_heat = p.add(f"{prefix}hb_heat", np.round(30_000 * k * (1 + 0.25 * np.cos(2 * np.pi * (p.hod - 4) / 24)), 3))
    hbs = (HybridBoilerSystem(f"{prefix}hb_090", f"{prefix}hb_heat", 0.90, 0.99, 40_000 * k, 4_000 * k),
           HybridBoilerSystem(f"{prefix}hb_093", f"{prefix}hb_heat", 0.93, 0.99, 40_000 * k, 4_000 * k))
    hp_heat = p.add(f"{prefix}hp_heat", np.round(25_000 * k * (1 + 0.3 * np.cos(2 * np.pi * (p.hod - 4) / 24)), 3))
    hp_cop = p.add(f"{prefix}hp_cop", np.round(3.0 + 0.6 * np.sin(2 * np.pi * (p.hod - 9) / 24), 4))
    hp = HeatPumpSystem(f"{prefix}heat_pump", f"{prefix}hp_heat", 9_000 * k, hp_cop, 0.99, 0.90,
                        3_000 * k, 35_000 * k, None,
                        ThermalStorageParams(6 * 8_000 * k, 0.99, 0.99, 0.0021, 0.0, 8_000 * k))
    cool_d = p.add(f"{prefix}cool_demand",
                   np.round(12_000 * k * (0.5 + 0.5 * np.clip(np.sin(np.pi * (p.hod - 8) / 12), 0, None)), 3))
    cool_eff = p.add(f"{prefix}cool_eer", np.round(3.0 - 0.5 * np.clip(np.sin(np.pi * (p.hod - 8) / 12), 0, None), 4))
    cool = CoolingSystem(f"{prefix}aircon", f"{prefix}cooling", 21_100 * k, cool_eff,
                         ThermalStorageParams(12 * 21_100 * k, 1.0, 1.0, 0.1, 0.0, math.inf))
    road = p.add(f"{prefix}road", np.round(1e6 * k * (1 + 0.8 * np.clip(np.sin(np.pi * (p.hod - 6) / 14), 0, None)), 1))
    bev = VehicleFleet(f"{prefix}bev", f"{prefix}road", 0.5, 0.2, 0.95, 0.0002, 0.0,
                       max_electric_distance=road,
                       inflexible_charging=p.add(f"{prefix}bev_ic", 250 * k * (1 + (p.hod >= 17))),
                       max_flexible_charging=_flat(p.T, 600 * k),
                       soc_min=_flat(p.T, 500 * k), soc_max=_flat(p.T, 8_000 * k))
    phev = VehicleFleet(f"{prefix}phev", f"{prefix}road", 0.3, 0.4, 0.95, 0.0002, 0.00055,
                        max_electric_distance=p.add(f"{prefix}phev_zmax", 0.6 * road),
                        inflexible_charging=p.add(f"{prefix}phev_ic", 120 * k * (1 + (p.hod >= 17))),
                        max_flexible_charging=_flat(p.T, 400 * k),
                        soc_min=_flat(p.T, 200 * k), soc_max=_flat(p.T, 4_000 * k))
    return Zone(
        zid, demand, renewables=res, thermal=(_ocgt(uid=f"{prefix}ocgt"),), chp_systems=tuple(chps),
        hydro=(hydro_u,), batteries=(battery_u,), ptg=(ptg_u,), hybrid_boilers=hbs,
        heat_pumps=(hp,), cooling=(cool,), vehicles=(bev, phev),
        heat_markets=tuple(heat_markets) + (Market(f"{prefix}hb_heat", hb_heat),
                                            Market(f"{prefix}hp_heat", hp_heat)),
        cooling_markets=(Market(f"{prefix}cooling", cool_d),),
        road_markets=(Market(f"{prefix}road", road),))


def all_de(T: int = DEFAULT_HORIZON) -> Scenario:
    """Every technology in one zone at the reference German capacities (MW)."""
    p = _Profiles(T, SEED + 7)
    zone = _all_zone(p, "DE", 1.0)
    return _scenario("all_de", p, [zone], ("ptg:ptg",))


def de_fr(T: int = DEFAULT_HORIZON) -> Scenario:
    """Two coupled zones; France adds a cheap must-run nuclear fleet."""
    p = _Profiles(T, SEED + 11)
    de_demand = p.demand("de_demand", 60.0, 12.0, 2.0)
    fr_demand = p.demand("fr_demand", 50.0, 8.0, 2.0)
    de = Zone("DE", de_demand, renewables=_res(p, "de_"), thermal=(_ocgt(uid="de_ocgt"),))
    nuclear = ThermalUnit("fr_nuclear", 45.0, 1.0, _flat(T, 1.0), 0.0, 0.0, 10.6, "nuclear")
    river = RenewableUnit("fr_run_of_river", 6.0, p.add("fr_river_av", 0.9), 0.0, 0.0,
                          "run_of_river")
    fr = Zone("FR", fr_demand,
              renewables=_res(p, "fr_", solar=30.0, onshore=25.0, offshore=5.0) + (river,),
              thermal=(nuclear, _ocgt(uid="fr_ocgt")))
    ics = (Interconnector("DE", "FR", 0.95, p.add("ntc_de_fr", 4.8)),
           Interconnector("FR", "DE", 0.95, p.add("ntc_fr_de", 4.8)))
    return _scenario("de_fr", p, [de, fr], ("thermal:fr_nuclear",), ics)


CASES: dict[str, Callable[[int], Scenario]] = {
    "res_ocgt": res_ocgt,
    "ptg": ptg,
    "battery": battery,
    "hydro": hydro,
    "vehicles": vehicles,
    "cooling": cooling,
    "heat_pumps": heat_pumps,
    "hybrid_boilers": hybrid_boilers,
    "chp": chp,
    "all_de": all_de,
    "de_fr": de_fr,
}


def make_cases(root: str | Path, names=None, horizon: int = DEFAULT_HORIZON) -> list[Path]:
    """Write the selected bundled cases under ``root/<name>/``."""
    root = Path(root)
    out = []
    for name in names or CASES:
        if name not in CASES:
            raise KeyError(f"unknown case {name!r}; choose from {sorted(CASES)}")
        out.append(save_scenario(CASES[name](horizon), root / name))
    return out
