"""Scenario data model, loader/writer and validation.

A scenario directory holds ``scenario.conf`` (YAML) and ``timeseries/*.csv``.
Every profile-valued field in the config is either a number (flat profile)
or the name of a time-series column. Columns must be unique across files
and every file must have exactly ``horizon`` rows indexed 0..T-1.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np
import yaml

CONFIG_NAME = "scenario.conf"
TIMESERIES_DIR = "timeseries"

_PROFILE = "profile"


def _profile(default: float | None = None):
    """Field holding an hourly profile; ``default`` is the flat value when omitted."""
    if default is None:
        return field(metadata={_PROFILE: True})
    return field(default=None, metadata={_PROFILE: True, "default": default})


class ScenarioError(ValueError):
    """Unreadable or inconsistent scenario input (message carries file/line context)."""


@dataclass(frozen=True, eq=False)
class ThermalStorageParams:
    energy_cap: float
    eta_in: float = 1.0
    eta_out: float = 1.0
    loss_factor: float = 0.0
    self_discharge: float = 0.0
    power_cap: float = math.inf


@dataclass(frozen=True, eq=False)
class Market:
    id: str
    demand: np.ndarray = _profile()


@dataclass(frozen=True, eq=False)
class RenewableUnit:
    id: str
    capacity: float
    availability: np.ndarray = _profile()
    variable_cost: float = 0.0
    curtailment_bonus: float = 0.0
    technology: str = "res"


@dataclass(frozen=True, eq=False)
class ThermalUnit:
    """Dispatchable non-CHP plant. ``capacity = inf`` means not limited."""

    id: str
    capacity: float
    efficiency: float
    availability: np.ndarray = _profile(1.0)
    load_change_cost: float = 0.0
    min_generation: float = 0.0
    fuel_price: float | None = None
    technology: str = "thermal"


@dataclass(frozen=True, eq=False)
class ChpSystem:
    id: str
    heat_market: str
    chp_capacity: float
    electrical_efficiency: float
    power_to_heat_ratio: float
    power_loss_factor: float
    boiler_efficiency: float
    design_ratio_chp: float = 0.0
    boiler_design_factor: float = 2.0
    electric_backup_design_factor: float = 1.0
    electric_backup_efficiency: np.ndarray = _profile(0.99)
    load_change_cost: float = 0.0
    storage: ThermalStorageParams | None = None
    network_loss: float = 0.0
    solar_thermal_factor: np.ndarray = _profile(1.0)
    availability: np.ndarray = _profile(1.0)
    heat_extraction_cost: float | None = None
    boiler_fuel_cost: float | None = None
    technology: str = "chp"


@dataclass(frozen=True, eq=False)
class HydroSystem:
    id: str
    pump_efficiency: float
    reservoir_cap_main: float
    reservoir_cap_pumped: float
    turbine_cap: np.ndarray = _profile(0.0)
    pumped_turbine_cap: np.ndarray = _profile(0.0)
    pump_cap: np.ndarray = _profile(0.0)
    inflow_main: np.ndarray = _profile(0.0)
    inflow_pumped: np.ndarray = _profile(0.0)
    technology: str = "hydro"


@dataclass(frozen=True, eq=False)
class PowerToGasUnit:
    """``fuel_credit = None`` credits the scenario's domestic methane price."""

    id: str
    capacity: float
    conversion_factor: float
    load_change_cost: float = 0.0
    fuel_credit: float | None = None
    technology: str = "ptg"


@dataclass(frozen=True, eq=False)
class BatteryUnit:
    id: str
    power_cap: float
    energy_cap: float
    eta_in: float
    eta_out: float
    loss_factor: float = 0.0
    self_discharge: float = 0.0
    load_change_cost: float = 0.0
    technology: str = "battery"


@dataclass(frozen=True, eq=False)
class HybridBoilerSystem:
    id: str
    heat_market: str
    boiler_efficiency: float
    electric_efficiency: float
    boiler_cap: float
    electric_cap: float
    boiler_fuel_cost: float | None = None
    network_loss: float = 0.0
    district_heating: bool = False
    solar_thermal_factor: np.ndarray = _profile(1.0)
    technology: str = "hybrid_boiler"


@dataclass(frozen=True, eq=False)
class HeatPumpSystem:
    id: str
    heat_market: str
    hp_cap: float
    cop_profile: np.ndarray = _profile()
    backup_electric_efficiency: float = 0.99
    backup_fuel_efficiency: float = 0.90
    backup_electric_cap: float = 0.0
    backup_fuel_cap: float = 0.0
    backup_fuel_cost: float | None = None
    storage: ThermalStorageParams | None = None
    solar_thermal_factor: np.ndarray = _profile(1.0)
    technology: str = "heat_pump"


@dataclass(frozen=True, eq=False)
class CoolingSystem:
    id: str
    cooling_market: str
    capacity: float
    electric_efficiency: np.ndarray = _profile()
    storage: ThermalStorageParams | None = None
    technology: str = "cooling"


@dataclass(frozen=True, eq=False)
class VehicleFleet:
    id: str
    road_market: str
    market_share: float
    flexible_share: float
    charging_efficiency: float
    electricity_per_km: float
    fuel_per_km: float
    max_electric_distance: np.ndarray = _profile()
    inflexible_charging: np.ndarray = _profile(0.0)
    max_flexible_charging: np.ndarray = _profile(0.0)
    soc_min: np.ndarray = _profile(0.0)
    soc_max: np.ndarray = _profile(0.0)
    ice_cost: float | None = None
    technology: str = "vehicle"


@dataclass(frozen=True, eq=False)
class Zone:
    id: str
    electricity_demand: np.ndarray = _profile()
    renewables: tuple[RenewableUnit, ...] = ()
    thermal: tuple[ThermalUnit, ...] = ()
    chp_systems: tuple[ChpSystem, ...] = ()
    hydro: tuple[HydroSystem, ...] = ()
    batteries: tuple[BatteryUnit, ...] = ()
    ptg: tuple[PowerToGasUnit, ...] = ()
    hybrid_boilers: tuple[HybridBoilerSystem, ...] = ()
    heat_pumps: tuple[HeatPumpSystem, ...] = ()
    cooling: tuple[CoolingSystem, ...] = ()
    vehicles: tuple[VehicleFleet, ...] = ()
    heat_markets: tuple[Market, ...] = ()
    cooling_markets: tuple[Market, ...] = ()
    road_markets: tuple[Market, ...] = ()

    def units(self):
        """All technology units with the name of the list they live in."""
        for name in UNIT_LISTS:
            for unit in getattr(self, name):
                yield name, unit

    def market(self, kind: str, market_id: str) -> Market:
        for m in getattr(self, kind):
            if m.id == market_id:
                return m
        raise KeyError(f"zone {self.id}: no {kind} entry {market_id!r}")


@dataclass(frozen=True, eq=False)
class Interconnector:
    from_zone: str
    to_zone: str
    transmission_efficiency: float
    ntc: np.ndarray = _profile()


@dataclass(frozen=True, eq=False)
class Scenario:
    horizon: int
    fuel_price_import: float
    fuel_price_domestic: float
    zones: tuple[Zone, ...] = ()
    interconnectors: tuple[Interconnector, ...] = ()
    timeseries: Mapping[str, np.ndarray] = field(default_factory=dict)
    name: str = ""
    expected_steps: tuple[str, ...] = ()

    def zone(self, zone_id: str) -> Zone:
        for z in self.zones:
            if z.id == zone_id:
                return z
        raise KeyError(f"no zone {zone_id!r}")


UNIT_TYPES = {
    "renewables": RenewableUnit,
    "thermal": ThermalUnit,
    "chp_systems": ChpSystem,
    "hydro": HydroSystem,
    "batteries": BatteryUnit,
    "ptg": PowerToGasUnit,
    "hybrid_boilers": HybridBoilerSystem,
    "heat_pumps": HeatPumpSystem,
    "cooling": CoolingSystem,
    "vehicles": VehicleFleet,
}
UNIT_LISTS = tuple(UNIT_TYPES)
MARKET_LISTS = ("heat_markets", "cooling_markets", "road_markets")
MARKET_REF = {"heat_market": "heat_markets", "cooling_market": "cooling_markets",
              "road_market": "road_markets"}


# --------------------------------------------------------------------------- loading

class _Located(dict):
    line: int = 0


class _LineLoader(yaml.SafeLoader):
    pass


def _construct_mapping(loader, node):
    loader.flatten_mapping(node)
    out = _Located(loader.construct_pairs(node))
    out.line = node.start_mark.line + 1
    return out


_LineLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


def _where(src: str, rec: Any) -> str:
    line = getattr(rec, "line", 0)
    return f"{src}:{line}" if line else src


def read_timeseries(directory: Path) -> tuple[dict[str, np.ndarray], int | None]:
    """Read every CSV under ``directory``; returns (columns, row count)."""
    store: dict[str, np.ndarray] = {}
    n_rows: int | None = None
    if not directory.is_dir():
        return store, None
    for path in sorted(directory.glob("*.csv")):
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ScenarioError(f"{path}:1: empty time-series file") from None
            header = [h.strip() for h in header]
            if not header or header[0] != "hour":
                raise ScenarioError(f"{path}:1: first column must be 'hour'")
            names = header[1:]
            values: list[list[float]] = []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != len(header):
                    raise ScenarioError(
                        f"{path}:{lineno}: malformed record, expected {len(header)} fields, got {len(row)}")
                try:
                    hour = int(row[0])
                    vals = [float(c) for c in row[1:]]
                except ValueError as exc:
                    raise ScenarioError(f"{path}:{lineno}: malformed record ({exc})") from None
                if hour != len(values):
                    raise ScenarioError(f"{path}:{lineno}: hour index {hour}, expected {len(values)}")
                values.append(vals)
        if n_rows is None:
            n_rows = len(values)
        elif len(values) != n_rows:
            raise ScenarioError(
                f"{path}: profile length mismatch ({len(values)} rows, other files have {n_rows})")
        arr = np.array(values, dtype=float).reshape(len(values), len(names))
        for k, name in enumerate(names):
            if name in store:
                raise ScenarioError(f"{path}:1: duplicate time-series column {name!r}")
            col = arr[:, k].copy()
            col.setflags(write=False)
            store[name] = col
    return store, n_rows


class _Context:
    def __init__(self, src: str, store: Mapping[str, np.ndarray], horizon: int):
        self.src = src
        self.store = store
        self.horizon = horizon

    def profile(self, value, rec, key) -> np.ndarray:
        if isinstance(value, bool):
            raise ScenarioError(f"{_where(self.src, rec)}: {key}: expected number or column name")
        if isinstance(value, (int, float)):
            arr = np.full(self.horizon, float(value))
        elif isinstance(value, str):
            if value not in self.store:
                raise ScenarioError(f"{_where(self.src, rec)}: {key}: unknown time-series column {value!r}")
            arr = np.array(self.store[value], dtype=float)
        else:
            raise ScenarioError(f"{_where(self.src, rec)}: {key}: expected number or column name")
        if len(arr) != self.horizon:
            raise ScenarioError(
                f"{_where(self.src, rec)}: {key}: profile length mismatch ({len(arr)} vs horizon {self.horizon})")
        arr.setflags(write=False)
        return arr


def _number(value, rec, key, ctx) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        if isinstance(value, str) and value.strip().lower() in ("inf", "unlimited"):
            return math.inf
        raise ScenarioError(f"{_where(ctx.src, rec)}: {key}: expected a number, got {value!r}")
    return float(value)


def _build(cls, rec, ctx: _Context, what: str):
    if not isinstance(rec, dict):
        raise ScenarioError(f"{_where(ctx.src, rec)}: {what}: malformed record (expected a mapping)")
    known = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(rec) - set(known))
    if unknown:
        raise ScenarioError(f"{_where(ctx.src, rec)}: {what}: unknown field(s) {unknown}")
    kwargs = {}
    for name, f in known.items():
        if name not in rec:
            if f.metadata.get(_PROFILE) and "default" in f.metadata:
                kwargs[name] = ctx.profile(f.metadata["default"], rec, name)
            elif f.default is dataclasses.MISSING and f.default_factory is dataclasses.MISSING:
                raise ScenarioError(f"{_where(ctx.src, rec)}: {what}: missing field {name!r}")
            continue
        value = rec[name]
        key = f"{what}.{name}"
        if f.metadata.get(_PROFILE):
            kwargs[name] = ctx.profile(value, rec, key)
        elif name == "storage":
            kwargs[name] = None if value is None else _build(ThermalStorageParams, value, ctx, key)
        elif f.type in ("str",):
            kwargs[name] = str(value)
        elif f.type == "bool":
            if not isinstance(value, bool):
                raise ScenarioError(f"{_where(ctx.src, rec)}: {key}: expected true/false")
            kwargs[name] = value
        elif f.type == "float | None":
            kwargs[name] = None if value is None else _number(value, rec, key, ctx)
        else:
            kwargs[name] = _number(value, rec, key, ctx)
    return cls(**kwargs)


def _build_zone(rec, ctx: _Context) -> Zone:
    if not isinstance(rec, dict):
        raise ScenarioError(f"{_where(ctx.src, rec)}: zone: malformed record")
    allowed = {"id", "electricity_demand", *UNIT_LISTS, *MARKET_LISTS}
    unknown = sorted(set(rec) - allowed)
    if unknown:
        raise ScenarioError(f"{_where(ctx.src, rec)}: zone: unknown field(s) {unknown}")
    if "id" not in rec or "electricity_demand" not in rec:
        raise ScenarioError(f"{_where(ctx.src, rec)}: zone: 'id' and 'electricity_demand' are required")
    zid = str(rec["id"])
    kwargs: dict[str, Any] = {
        "id": zid,
        "electricity_demand": ctx.profile(rec["electricity_demand"], rec, f"{zid}.electricity_demand"),
    }
    for kind in MARKET_LISTS:
        kwargs[kind] = tuple(_build(Market, m, ctx, f"{zid}.{kind}") for m in rec.get(kind) or ())
    ids: set[str] = set()
    for kind, cls in UNIT_TYPES.items():
        units = []
        for urec in rec.get(kind) or ():
            unit = _build(cls, urec, ctx, f"{zid}.{kind}")
            if unit.id in ids:
                raise ScenarioError(f"{_where(ctx.src, urec)}: duplicate unit id {unit.id!r} in zone {zid}")
            ids.add(unit.id)
            for ref, mkind in MARKET_REF.items():
                target = getattr(unit, ref, None)
                if target is not None and target not in {m.id for m in kwargs[mkind]}:
                    raise ScenarioError(
                        f"{_where(ctx.src, urec)}: {zid}.{unit.id}: dangling market reference "
                        f"{ref}={target!r}")
            units.append(unit)
        kwargs[kind] = tuple(units)
    return Zone(**kwargs)


def load_scenario(path: str | Path, horizon: int | None = None) -> Scenario:
    """Load and fully resolve a scenario directory.

    Args:
        path: directory containing ``scenario.conf`` and ``timeseries/``.
        horizon: optional override; must not exceed the declared horizon.
            Profiles are truncated to the first ``horizon`` hours.

    Raises:
        ScenarioError: missing file, malformed record, profile length
            mismatch, dangling market reference.
    """
    path = Path(path)
    conf = path / CONFIG_NAME
    if not conf.is_file():
        raise ScenarioError(f"{conf}: missing file")
    src = str(conf)
    try:
        raw = yaml.load(conf.read_text(encoding="utf-8"), Loader=_LineLoader)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"{src}: malformed document: {exc}") from None
    if not isinstance(raw, dict):
        raise ScenarioError(f"{src}:1: malformed document (expected a mapping at top level)")
    allowed = {"name", "horizon", "fuel_price_import", "fuel_price_domestic", "zones",
               "interconnectors", "expected_steps"}
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ScenarioError(f"{src}:1: unknown top-level field(s) {unknown}")
    for key in ("horizon", "fuel_price_import", "fuel_price_domestic"):
        if key not in raw:
            raise ScenarioError(f"{src}:1: missing field {key!r}")
    declared = raw["horizon"]
    if isinstance(declared, bool) or not isinstance(declared, int):
        raise ScenarioError(f"{src}:1: horizon must be an integer")

    store, n_rows = read_timeseries(path / TIMESERIES_DIR)
    if n_rows is not None and n_rows != declared:
        raise ScenarioError(
            f"{path / TIMESERIES_DIR}: profile length mismatch ({n_rows} rows vs horizon {declared})")
    if horizon is not None:
        if horizon < 1 or horizon > declared:
            raise ScenarioError(f"horizon override {horizon} outside 1..{declared}")
        store = {k: _frozen(v[:horizon]) for k, v in store.items()}
    T = declared if horizon is None else horizon
    ctx = _Context(src, store, T)

    zones = tuple(_build_zone(z, ctx) for z in raw.get("zones") or ())
    ics = tuple(_build(Interconnector, r, ctx, "interconnectors") for r in raw.get("interconnectors") or ())
    zone_ids = {z.id for z in zones}
    if len(zone_ids) != len(zones):
        raise ScenarioError(f"{src}: duplicate zone ids")
    for rec, ic in zip(raw.get("interconnectors") or (), ics):
        for end in (ic.from_zone, ic.to_zone):
            if end not in zone_ids:
                raise ScenarioError(f"{_where(src, rec)}: interconnector references unknown zone {end!r}")
    return Scenario(
        horizon=T,
        fuel_price_import=_number(raw["fuel_price_import"], raw, "fuel_price_import", ctx),
        fuel_price_domestic=_number(raw["fuel_price_domestic"], raw, "fuel_price_domestic", ctx),
        zones=zones,
        interconnectors=ics,
        timeseries=store,
        name=str(raw.get("name", path.name)),
        expected_steps=tuple(str(s) for s in raw.get("expected_steps") or ()),
    )


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


# --------------------------------------------------------------------------- writing

def _dump_value(value, f, store: dict[str, np.ndarray], column: str):
    if f is not None and f.metadata.get(_PROFILE):
        arr = np.asarray(value, dtype=float)
        if arr.size and np.all(arr == arr[0]):
            return float(arr[0])
        for name, col in store.items():
            if len(col) == len(arr) and np.array_equal(col, arr):
                return name
        store[column] = arr
        return column
    if isinstance(value, ThermalStorageParams):
        return {g.name: _dump_value(getattr(value, g.name), g, store, column)
                for g in dataclasses.fields(value)}
    if isinstance(value, float):
        return value
    return value


def _dump_record(obj, store, prefix) -> dict:
    return {f.name: _dump_value(getattr(obj, f.name), f, store, f"{prefix}.{f.name}")
            for f in dataclasses.fields(obj)}


def save_scenario(scenario: Scenario, path: str | Path) -> Path:
    """Write ``scenario`` as a directory that ``load_scenario`` reads back identically."""
    path = Path(path)
    (path / TIMESERIES_DIR).mkdir(parents=True, exist_ok=True)
    store: dict[str, np.ndarray] = {k: np.asarray(v) for k, v in scenario.timeseries.items()}
    zones = []
    for z in scenario.zones:
        zrec: dict[str, Any] = {
            "id": z.id,
            "electricity_demand": _dump_value(
                z.electricity_demand, _field(Zone, "electricity_demand"), store, f"{z.id}.demand"),
        }
        for kind in MARKET_LISTS:
            ms = getattr(z, kind)
            if ms:
                zrec[kind] = [_dump_record(m, store, f"{z.id}.{m.id}") for m in ms]
        for kind in UNIT_LISTS:
            us = getattr(z, kind)
            if us:
                zrec[kind] = [_dump_record(u, store, f"{z.id}.{u.id}") for u in us]
        zones.append(zrec)
    doc: dict[str, Any] = {
        "name": scenario.name,
        "horizon": scenario.horizon,
        "fuel_price_import": scenario.fuel_price_import,
        "fuel_price_domestic": scenario.fuel_price_domestic,
    }
    if scenario.expected_steps:
        doc["expected_steps"] = list(scenario.expected_steps)
    doc["zones"] = zones
    if scenario.interconnectors:
        doc["interconnectors"] = [
            _dump_record(ic, store, f"ic.{ic.from_zone}-{ic.to_zone}") for ic in scenario.interconnectors]
    (path / CONFIG_NAME).write_text(
        yaml.safe_dump(doc, sort_keys=False, default_flow_style=False), encoding="utf-8")
    for old in (path / TIMESERIES_DIR).glob("*.csv"):
        old.unlink()
    if store:
        names = list(store)
        with (path / TIMESERIES_DIR / "profiles.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["hour", *names])
            for t in range(scenario.horizon):
                w.writerow([t, *(repr(float(store[n][t])) for n in names)])
    return path


def _field(cls, name):
    return {f.name: f for f in dataclasses.fields(cls)}[name]


def scenarios_equal(a: Any, b: Any) -> bool:
    """Field-by-field structural equality (profiles compared exactly)."""
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return (isinstance(a, np.ndarray) and isinstance(b, np.ndarray)
                and a.shape == b.shape and np.array_equal(a, b))
    if dataclasses.is_dataclass(a):
        return type(a) is type(b) and all(
            scenarios_equal(getattr(a, f.name), getattr(b, f.name)) for f in dataclasses.fields(a))
    if isinstance(a, Mapping):
        return (isinstance(b, Mapping) and set(a) == set(b)
                and all(scenarios_equal(a[k], b[k]) for k in a))
    if isinstance(a, (tuple, list)):
        return (isinstance(b, (tuple, list)) and len(a) == len(b)
                and all(scenarios_equal(x, y) for x, y in zip(a, b)))
    return a == b


def restrict_zones(scenario: Scenario, zone_ids: Sequence[str]) -> Scenario:
    """Keep only ``zone_ids`` and the interconnectors between them."""
    keep = list(zone_ids)
    missing = [z for z in keep if z not in {z.id for z in scenario.zones}]
    if missing:
        raise ScenarioError(f"unknown zone(s) {missing}")
    zones = tuple(z for z in scenario.zones if z.id in keep)
    ics = tuple(ic for ic in scenario.interconnectors if ic.from_zone in keep and ic.to_zone in keep)
    return dataclasses.replace(scenario, zones=zones, interconnectors=ics)


# --------------------------------------------------------------------------- validation

def validate(s: Scenario) -> list[str]:
    """Return one message per violated invariant; empty when the scenario is consistent."""
    out: list[str] = []
    T = s.horizon

    def bad(where: str, fieldname: str, rule: str, got) -> None:
        out.append(f"{where}: {fieldname} violates {rule} (got {got})")

    def check_len(where, fieldname, arr):
        if arr is None or len(arr) != T:
            out.append(f"{where}: {fieldname} profile length mismatch "
                       f"({None if arr is None else len(arr)} vs horizon {T})")
            return False
        return True

    if T < 1:
        bad("scenario", "horizon", "horizon >= 1", T)
    if s.fuel_price_domestic > s.fuel_price_import:
        bad("scenario", "fuel_price_domestic", "fuel_price_domestic <= fuel_price_import",
            s.fuel_price_domestic)

    for z in s.zones:
        if check_len(z.id, "electricity_demand", z.electricity_demand) and np.any(z.electricity_demand < 0):
            bad(z.id, "electricity_demand", "demand >= 0", float(z.electricity_demand.min()))
        for kind in MARKET_LISTS:
            for m in getattr(z, kind):
                w = f"{z.id}/{m.id}"
                if check_len(w, "demand", m.demand) and np.any(m.demand < 0):
                    bad(w, "demand", "demand >= 0", float(m.demand.min()))
        referenced = {(MARKET_REF[ref], getattr(u, ref))
                      for _, u in z.units() for ref in MARKET_REF if hasattr(u, ref)}
        for kind in MARKET_LISTS:
            for m in getattr(z, kind):
                if (kind, m.id) not in referenced:
                    out.append(f"{z.id}/{m.id}: market not referenced by any supplying unit")
        for kind, u in z.units():
            w = f"{z.id}/{u.id}"
            for f in dataclasses.fields(u):
                if f.metadata.get(_PROFILE):
                    check_len(w, f.name, getattr(u, f.name))
            out.extend(_unit_rules(w, u, bad))

    zone_ids = {z.id for z in s.zones}
    for ic in s.interconnectors:
        w = f"interconnector {ic.from_zone}->{ic.to_zone}"
        if ic.from_zone not in zone_ids or ic.to_zone not in zone_ids:
            out.append(f"{w}: unknown zone")
        if ic.from_zone == ic.to_zone:
            out.append(f"{w}: from_zone equals to_zone")
        if not 0 < ic.transmission_efficiency < 1:
            bad(w, "transmission_efficiency", "0 < TL_{i,j} < 1", ic.transmission_efficiency)
        if check_len(w, "ntc", ic.ntc) and np.any(ic.ntc < 0):
            bad(w, "ntc", "ntc >= 0", float(ic.ntc.min()))
    return out


def _storage_rules(w, st: ThermalStorageParams | None, bad):
    if st is None:
        return
    if st.energy_cap < 0:
        bad(w, "storage.energy_cap", "energy_cap >= 0", st.energy_cap)
    if not (0 < st.eta_in <= 1 and 0 < st.eta_out <= 1):
        bad(w, "storage.eta_in/eta_out", "0 < eta <= 1", (st.eta_in, st.eta_out))
    if not 0 <= st.loss_factor < 1:
        bad(w, "storage.loss_factor", "0 <= loss_factor < 1", st.loss_factor)
    if st.self_discharge < 0:
        bad(w, "storage.self_discharge", "self_discharge >= 0", st.self_discharge)


def _unit_rules(w: str, u, bad) -> list[str]:
    # bad() appends directly; return value kept for symmetry with extend()
    if isinstance(u, RenewableUnit):
        if u.capacity < 0:
            bad(w, "capacity", "capacity >= 0", u.capacity)
        if np.any(u.availability < 0) or np.any(u.availability > 1):
            bad(w, "availability", "0 <= availability <= 1",
                (float(u.availability.min()), float(u.availability.max())))
    elif isinstance(u, ThermalUnit):
        if not 0 < u.efficiency <= 1:
            bad(w, "efficiency", "0 < efficiency <= 1", u.efficiency)
        if u.min_generation != 0:
            bad(w, "min_generation", "min_generation = 0", u.min_generation)
        if u.capacity < 0:
            bad(w, "capacity", "capacity >= 0", u.capacity)
    elif isinstance(u, ChpSystem):
        if not u.power_to_heat_ratio > 0:
            bad(w, "power_to_heat_ratio", "PH_g > 0", u.power_to_heat_ratio)
        if not 0 <= u.power_loss_factor < 1:
            bad(w, "power_loss_factor", "0 <= PL_g < 1", u.power_loss_factor)
        if u.boiler_design_factor < 0:
            bad(w, "boiler_design_factor", "design factor >= 0", u.boiler_design_factor)
        if u.electric_backup_design_factor < 0:
            bad(w, "electric_backup_design_factor", "design factor >= 0", u.electric_backup_design_factor)
        if not 0 <= u.network_loss < 1:
            bad(w, "network_loss", "0 <= chi_g < 1", u.network_loss)
        if not 0 < u.electrical_efficiency <= 1:
            bad(w, "electrical_efficiency", "0 < efficiency <= 1", u.electrical_efficiency)
        if not 0 < u.boiler_efficiency <= 1:
            bad(w, "boiler_efficiency", "0 < efficiency <= 1", u.boiler_efficiency)
        if np.any(u.electric_backup_efficiency <= 0):
            bad(w, "electric_backup_efficiency", "efficiency > 0", float(u.electric_backup_efficiency.min()))
        _storage_rules(w, u.storage, bad)
    elif isinstance(u, HydroSystem):
        if not 0 < u.pump_efficiency <= 1:
            bad(w, "pump_efficiency", "0 < pump_efficiency <= 1", u.pump_efficiency)
        for name in ("inflow_main", "inflow_pumped"):
            if np.any(getattr(u, name) < 0):
                bad(w, name, "inflow >= 0", float(getattr(u, name).min()))
    elif isinstance(u, PowerToGasUnit):
        if not 0 < u.conversion_factor < 1:
            bad(w, "conversion_factor", "0 < PF_l < 1", u.conversion_factor)
    elif isinstance(u, BatteryUnit):
        if not 0 < u.eta_in * u.eta_out <= 1:
            bad(w, "eta_in*eta_out", "0 < eta_in*eta_out <= 1", u.eta_in * u.eta_out)
        if u.energy_cap < 0:
            bad(w, "energy_cap", "energy_cap >= 0", u.energy_cap)
        if not 0 <= u.loss_factor < 1:
            bad(w, "loss_factor", "0 <= loss_factor < 1", u.loss_factor)
    elif isinstance(u, HybridBoilerSystem):
        if not u.district_heating and u.network_loss != 0:
            bad(w, "network_loss", "chi_b = 0 for on-site generation", u.network_loss)
        if not 0 <= u.network_loss < 1:
            bad(w, "network_loss", "0 <= chi_b < 1", u.network_loss)
        if not 0 < u.boiler_efficiency <= 1:
            bad(w, "boiler_efficiency", "0 < efficiency <= 1", u.boiler_efficiency)
        if not u.electric_efficiency > 0:
            bad(w, "electric_efficiency", "efficiency > 0", u.electric_efficiency)
    elif isinstance(u, HeatPumpSystem):
        if np.any(u.cop_profile <= 0):
            bad(w, "cop_profile", "cop > 0", float(u.cop_profile.min()))
        _storage_rules(w, u.storage, bad)
    elif isinstance(u, CoolingSystem):
        if np.any(u.electric_efficiency <= 0):
            bad(w, "electric_efficiency", "efficiency > 0", float(u.electric_efficiency.min()))
        _storage_rules(w, u.storage, bad)
    elif isinstance(u, VehicleFleet):
        if not 0 <= u.flexible_share <= 1:
            bad(w, "flexible_share", "0 <= FS_v <= 1", u.flexible_share)
        if np.any(u.soc_min > u.soc_max):
            bad(w, "soc_min/soc_max", "soc_min <= soc_max", "soc_min > soc_max")
        if not 0 < u.charging_efficiency <= 1:
            bad(w, "charging_efficiency", "0 < efficiency <= 1", u.charging_efficiency)
    return []
