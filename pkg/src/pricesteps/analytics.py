"""Prices, duration curves, step detection, capture prices and CHP state labels."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import oracle
from .builders import Model
from .lp import Solution
from .scenario import ChpSystem, Scenario

DEFAULT_STEP_TOL = 0.5
DEFAULT_MIN_STEP_HOURS = 5
RUNNING = 1e-6  # fraction of capacity above which a unit counts as running


class AnalyticsError(ValueError):
    pass


@dataclass(frozen=True)
class PriceSeries:
    zone: str
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class DurationCurve:
    zone: str
    values: np.ndarray
    hours: np.ndarray  # hours[k] is the hour holding rank k


@dataclass(frozen=True)
class PriceStep:
    level: float
    start_rank: int
    end_rank: int
    matched_source: str | None = None
    deviation: float | None = None

    @property
    def duration(self) -> int:
        return self.end_rank - self.start_rank + 1


@dataclass(frozen=True)
class ClusterValue:
    zone: str
    technology: str
    direction: str  # "generation" or "consumption"
    energy: float
    value: float
    capture_price: float | None


@dataclass(frozen=True)
class MarketValueReport:
    clusters: tuple[ClusterValue, ...]
    average_price: Mapping[str, float]

    def cluster(self, zone: str, technology: str, direction: str = "generation") -> ClusterValue:
        for c in self.clusters:
            if (c.zone, c.technology, c.direction) == (zone, technology, direction):
                return c
        raise KeyError((zone, technology, direction))


@dataclass(frozen=True)
class ChpStateLabel:
    hour: int
    state: str
    heat_value: float
    power_price: float
    heat_dual: float = math.nan


# --------------------------------------------------------------------------- prices

def extract_prices(solution: Solution, clearing: Mapping[tuple[str, int], int] | Model,
                   zone: str) -> PriceSeries:
    """Dual of the zone's clearing row in every hour."""
    if not solution.optimal:
        raise AnalyticsError(f"no prices from a {solution.status} solution")
    if isinstance(clearing, Model):
        clearing = clearing.clearing
    hours = sorted(t for (z, t) in clearing if z == zone)
    if not hours:
        raise AnalyticsError(f"no clearing rows for zone {zone!r}")
    vals = np.array([solution.dual[clearing[(zone, t)]] for t in hours], dtype=float)
    return PriceSeries(zone, vals)


def duration_curve(prices: PriceSeries | Sequence[float]) -> DurationCurve:
    """Prices sorted nonincreasing; ties keep chronological order."""
    zone = prices.zone if isinstance(prices, PriceSeries) else ""
    v = np.asarray(prices.values if isinstance(prices, PriceSeries) else prices, dtype=float)
    order = np.argsort(-v, kind="stable")
    return DurationCurve(zone, v[order], order)


def detect_steps(curve: DurationCurve | Sequence[float],
                 level_tolerance: float = DEFAULT_STEP_TOL,
                 min_duration: int = DEFAULT_MIN_STEP_HOURS,
                 predictions: Iterable[oracle.OpportunityPrediction] | None = None
                 ) -> list[PriceStep]:
    """Maximal runs of the sorted curve whose spread stays within ``level_tolerance``.

    A run starting at rank ``s`` extends while ``v[s] - v[j] <= level_tolerance``.
    Runs of at least ``min_duration`` hours become steps (level = median of
    the run) and the scan resumes after them; shorter runs are skipped one
    rank at a time. With ``predictions`` each step is tagged with the
    nearest predicted level inside the tolerance.
    """
    v = np.asarray(curve.values if isinstance(curve, DurationCurve) else curve, dtype=float)
    if v.size > 1 and np.any(np.diff(v) > 1e-12):
        raise AnalyticsError("curve must be sorted nonincreasing")
    preds = list(predictions or ())
    steps = []
    s, n = 0, len(v)
    while s < n:
        e = s
        while e + 1 < n and v[s] - v[e + 1] <= level_tolerance:
            e += 1
        if e - s + 1 >= min_duration:
            level = float(np.median(v[s:e + 1]))
            src, dev = match_level(level, preds, level_tolerance)
            steps.append(PriceStep(level, s, e, src, dev))
            s = e + 1
        else:
            s += 1
    return steps


def match_level(level: float, predictions: Iterable[oracle.OpportunityPrediction],
                tolerance: float) -> tuple[str | None, float | None]:
    best, best_dev = None, None
    for p in predictions:
        for name, target in prediction_levels(p):
            dev = level - target
            if abs(dev) <= tolerance and (best_dev is None or abs(dev) < abs(best_dev)):
                best, best_dev = name, dev
    return best, best_dev


def prediction_levels(p: oracle.OpportunityPrediction) -> list[tuple[str, float]]:
    out = [(p.formula, p.level)]
    if p.ramp:
        out += [(p.formula + "-ramp", p.level - p.ramp), (p.formula + "+ramp", p.level + p.ramp)]
    return out


# --------------------------------------------------------------------------- oracle hookup

def _ocgt_units(zone):
    ocgt = [g for g in zone.thermal if "ocgt" in g.technology.lower()]
    return ocgt or list(zone.thermal)


def predictions(scenario: Scenario, zone_id: str | None = None) -> list[oracle.OpportunityPrediction]:
    """Analytic step levels implied by the scenario's parameters.

    Formula ids look like ``<mechanism>:<unit id>``; ramp neighbours add a
    ``+ramp``/``-ramp`` suffix when matched.
    """
    P, Pd = scenario.fuel_price_import, scenario.fuel_price_domestic
    out: list[oracle.OpportunityPrediction] = []
    for zone in scenario.zones:
        if zone_id is not None and zone.id != zone_id:
            continue
        for r in zone.renewables:
            if r.variable_cost > 0:
                out.append(oracle.OpportunityPrediction(
                    f"renewable:{r.id}", {"C_VP": r.variable_cost}, r.variable_cost))
            if r.curtailment_bonus > 0:
                # full surplus: the price is the bonus of the unit curtailed at the margin
                out.append(oracle.OpportunityPrediction(
                    f"curtailment:{r.id}", {"C_CU": r.curtailment_bonus}, r.curtailment_bonus))
        for g in zone.thermal:
            fp = P if g.fuel_price is None else g.fuel_price
            out.append(oracle.OpportunityPrediction(
                f"thermal:{g.id}", {"P": fp, "eta": g.efficiency},
                oracle.thermal_marginal(fp, g.efficiency), 2 * g.load_change_cost))
        peak = [oracle.thermal_marginal(P if g.fuel_price is None else g.fuel_price, g.efficiency)
                for g in _ocgt_units(zone)]
        marginal = max(peak) if peak else None
        for l in zone.ptg:
            credit = Pd if l.fuel_credit is None else l.fuel_credit
            out.append(oracle.OpportunityPrediction(
                f"ptg:{l.id}", {"P": credit, "PF": l.conversion_factor},
                oracle.ptg_willingness(credit, l.conversion_factor), 2 * l.load_change_cost))
        if marginal is not None:
            for a in zone.batteries:
                rt = a.eta_in * a.eta_out
                out.append(oracle.OpportunityPrediction(
                    f"battery:{a.id}", {"marginal": marginal, "roundtrip": rt},
                    oracle.storage_step(marginal, rt)))
            for u in zone.hydro:
                out.append(oracle.OpportunityPrediction(
                    f"hydro:{u.id}", {"marginal": marginal, "roundtrip": u.pump_efficiency},
                    oracle.storage_step(marginal, u.pump_efficiency)))
        for b in zone.hybrid_boilers:
            c = P if b.boiler_fuel_cost is None else b.boiler_fuel_cost
            out.append(oracle.OpportunityPrediction(
                f"hybrid_boiler:{b.id}", {"P": c, "eta_cb": b.boiler_efficiency,
                                          "eta_con": b.electric_efficiency},
                oracle.boiler_electric_step(c, b.boiler_efficiency, b.electric_efficiency)))
        for h in zone.heat_pumps:
            if h.backup_electric_cap > 0 and h.backup_fuel_cap > 0:
                c = P if h.backup_fuel_cost is None else h.backup_fuel_cost
                out.append(oracle.OpportunityPrediction(
                    f"heat_pump_backup:{h.id}", {"P": c, "eta_cb": h.backup_fuel_efficiency,
                                                 "eta_con": h.backup_electric_efficiency},
                    oracle.boiler_electric_step(c, h.backup_fuel_efficiency,
                                                h.backup_electric_efficiency)))
        for g in zone.chp_systems:
            out.extend(chp_predictions(g, P))
        for v in zone.vehicles:
            if v.fuel_per_km <= 0:
                continue  # battery-only fleet, no fuel switch
            c = P if v.ice_cost is None else v.ice_cost
            out.append(oracle.OpportunityPrediction(
                f"vehicle:{v.id}", {"P": c, "FC": v.fuel_per_km, "EC": v.electricity_per_km},
                oracle.vehicle_fuel_switch(c, v.fuel_per_km, v.electricity_per_km)))
    return out


def chp_predictions(g: ChpSystem, P: float) -> list[oracle.OpportunityPrediction]:
    ph, pl, eta = g.power_to_heat_ratio, g.power_loss_factor, g.electrical_efficiency
    lc = g.load_change_cost
    out = [oracle.OpportunityPrediction(
        f"chp_marginal:{g.id}", {"P": P, "eta": eta}, oracle.thermal_marginal(P, eta), 2 * lc)]
    out.append(oracle.OpportunityPrediction(
        f"chp_boiler:{g.id}", {"P": P, "eta_gen": eta, "eta_cb": g.boiler_efficiency,
                               "ph": ph, "pl": pl},
        oracle.chp_vs_fuel_boiler(P, eta, g.boiler_efficiency, ph, pl),
        oracle.chp_vs_fuel_boiler_ramp(lc, ph, pl)))
    for k, eta_con in enumerate(sorted(set(np.round(g.electric_backup_efficiency, 12).tolist()))):
        suffix = "" if k == 0 else f"#{k}"
        out.append(oracle.OpportunityPrediction(
            f"chp_p2h:{g.id}{suffix}", {"P": P, "eta_gen": eta, "ph": ph, "pl": pl,
                                        "eta_con": eta_con},
            oracle.chp_vs_electric_backup(P, eta, ph, pl, eta_con),
            oracle.chp_vs_electric_backup_ramp(lc, ph, pl, eta_con)))
        # with the CHP off, the backup pair behaves like a hybrid boiler
        c = P if g.boiler_fuel_cost is None else g.boiler_fuel_cost
        out.append(oracle.OpportunityPrediction(
            f"chp_backup:{g.id}{suffix}", {"P": c, "eta_cb": g.boiler_efficiency,
                                           "eta_con": eta_con},
            oracle.boiler_electric_step(c, g.boiler_efficiency, eta_con)))
    return out


# --------------------------------------------------------------------------- market values

def _tag_index(model: Model) -> dict[int, tuple]:
    return {h: tag for tag, h in model.registry.items()}


def market_values(solution: Solution, prices: Mapping[str, PriceSeries] | PriceSeries,
                  model: Model) -> MarketValueReport:
    """Generation- and consumption-weighted prices per technology cluster.

    Imports and exports appear as their own clusters so that, per zone,
    generation energy equals demand plus consumption energy.
    """
    if not solution.optimal:
        raise AnalyticsError(f"no market values from a {solution.status} solution")
    if isinstance(prices, PriceSeries):
        prices = {prices.zone: prices}
    tags = _tag_index(model)
    x = solution.primal
    acc: dict[tuple[str, str, str], list[float]] = {}
    for (zone, t), row in sorted(model.registry.injections.items()):
        if zone not in prices:
            continue
        p = float(prices[zone].values[t])
        for h, coef in row.items():
            tag = tags[h]
            if tag[2] == "FLOW":
                tech = "import" if coef > 0 else "export"
            else:
                kind, unit = model.registry.units[(tag[0], tag[1])]
                tech = unit.technology
            direction = "generation" if coef > 0 else "consumption"
            e = abs(coef) * float(x[h])
            slot = acc.setdefault((zone, tech, direction), [0.0, 0.0])
            slot[0] += e
            slot[1] += e * p
    clusters = []
    for (zone, tech, direction), (e, val) in sorted(acc.items()):
        cap = val / e if e > 1e-9 else None
        clusters.append(ClusterValue(zone, tech, direction, e, val, cap))
    avg = {z: float(np.mean(ps.values)) for z, ps in prices.items()}
    return MarketValueReport(tuple(clusters), avg)


def capture_price(energy: Sequence[float], prices: Sequence[float]) -> float | None:
    """Energy-weighted mean price; None when no energy was produced."""
    e = np.asarray(energy, dtype=float)
    total = float(e.sum())
    if total <= 1e-12:
        return None
    return float(e @ np.asarray(prices, dtype=float)) / total


# --------------------------------------------------------------------------- CHP states

_STATE_TABLE = {
    # (ocgt running, chp load, fuel boiler, electric backup) -> state
    (True, "full", "partial", "full"): "A",
    (False, "backpressure", "partial", "full"): "B",
    (False, "off", "partial", "full"): "C",
    (True, "full", "off", "partial"): "D",
    (False, "backpressure", "off", "partial"): "E",
    (False, "off", "off", "partial"): "F",
    (True, "full", "off", "off"): "G",
    (False, "below", "off", "off"): "H",
}


def _level(value: float, cap: float) -> str:
    if cap <= 0 or value <= RUNNING * cap:
        return "off"
    if value >= (1 - RUNNING) * cap:
        return "full"
    return "partial"


def classify_chp_states(solution: Solution, model: Model, unit_id: str,
                        prices: PriceSeries | None = None, zone_id: str | None = None
                        ) -> list[ChpStateLabel]:
    """Label every hour of one CHP system with its operating state A-H.

    Hours that fit no row of the state table are labelled ``unclassified``
    and keep the LP heat dual as their heat value.
    """
    if not solution.optimal:
        raise AnalyticsError(f"cannot classify a {solution.status} solution")
    reg, lp, scen = model.registry, model.lp, model.scenario
    zone = next((z for z in scen.zones if any(g.id == unit_id for g in z.chp_systems)
                 and (zone_id is None or z.id == zone_id)), None)
    if zone is None:
        raise AnalyticsError(f"no CHP system {unit_id!r}")
    g = next(u for u in zone.chp_systems if u.id == unit_id)
    if prices is None:
        prices = extract_prices(solution, model.clearing, zone.id)
    P = scen.fuel_price_import
    x = solution.primal
    gen = x[reg.series(zone.id, g.id, "GEN")]
    q = x[reg.series(zone.id, g.id, "q_CHP")]
    y = x[reg.series(zone.id, g.id, "y_CB")]
    con = x[reg.series(zone.id, g.id, "CON")]
    cap = g.chp_capacity
    ocgts = _ocgt_units(zone)
    ocgt_gen = [(x[reg.series(zone.id, o.id, "GEN")], np.asarray(lp.upper)[reg.series(zone.id, o.id, "GEN")])
                for o in ocgts]
    eta_ocgt = ocgts[0].efficiency if ocgts else None
    c_cb = P if g.boiler_fuel_cost is None else g.boiler_fuel_cost
    c_chp = P * g.power_loss_factor if g.heat_extraction_cost is None else g.heat_extraction_cost
    heat_rows = [lp.constraint((zone.id, g.id, "chpDemandCoverage", t)) for t in range(len(gen))]
    labels = []
    for t in range(len(gen)):
        running = any(xs[t] > RUNNING * max(ub[t], 1.0) for xs, ub in ocgt_gen)
        av_cap = float(g.availability[t]) * cap
        use = gen[t] + g.power_loss_factor * q[t]
        if gen[t] <= RUNNING * cap:
            chp = "off"
        elif use >= av_cap - RUNNING * cap:
            chp = "full"
        elif gen[t] - g.power_to_heat_ratio * q[t] <= RUNNING * cap:
            chp = "backpressure"
        else:
            chp = "below"
        boiler = _level(g.boiler_efficiency * y[t], g.boiler_design_factor * cap)
        backup = _level(con[t], g.electric_backup_design_factor * cap)
        state = _STATE_TABLE.get((running, chp, boiler, backup), "unclassified")
        price = float(prices.values[t])
        dual = float(solution.dual[heat_rows[t]])
        if state in "ABC":
            hv = c_cb / g.boiler_efficiency
        elif state in "DEF":
            hv = price / float(g.electric_backup_efficiency[t])
        elif state == "G" and eta_ocgt is not None:
            hv = oracle.case_g_heat_value(P, g.power_loss_factor, g.electrical_efficiency, eta_ocgt)
        elif state == "H":
            hv = c_chp
        else:
            hv = dual
        labels.append(ChpStateLabel(t, state, hv, price, dual))
    return labels


# --------------------------------------------------------------------------- CSV emitters

def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    out = f"{float(v):.6f}"
    return "0.000000" if out == "-0.000000" else out


def _write(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(r)
    return path


def write_prices(path, prices: PriceSeries) -> Path:
    return _write(path, ["hour", "price"], ((t, _fmt(p)) for t, p in enumerate(prices.values)))


def write_duration(path, curve: DurationCurve) -> Path:
    return _write(path, ["rank", "hour", "price"],
                  ((k, int(h), _fmt(p)) for k, (h, p) in enumerate(zip(curve.hours, curve.values))))


def write_steps(path, steps: Sequence[PriceStep]) -> Path:
    return _write(path, ["level", "start_rank", "end_rank", "duration", "matched_source", "deviation"],
                  ((_fmt(s.level), s.start_rank, s.end_rank, s.duration, s.matched_source or "",
                    _fmt(s.deviation)) for s in steps))


def write_market_values(path, report: MarketValueReport) -> Path:
    rows = [(c.zone, c.technology, c.direction, _fmt(c.energy), _fmt(c.value),
             _fmt(c.capture_price), _fmt(report.average_price.get(c.zone)))
            for c in report.clusters]
    return _write(path, ["zone", "technology", "direction", "energy_mwh", "value_eur",
                         "capture_price", "average_price"], rows)


def write_chp_states(path, labels: Sequence[ChpStateLabel]) -> Path:
    return _write(path, ["hour", "state", "heat_value", "power_price", "heat_dual"],
                  ((l.hour, l.state, _fmt(l.heat_value), _fmt(l.power_price), _fmt(l.heat_dual))
                   for l in labels))


def dispatch_table(solution: Solution, model: Model, zone: str) -> tuple[list[str], np.ndarray]:
    """Hourly power injections per (unit, role) in a zone; consumption is negative."""
    tags = _tag_index(model)
    T = model.scenario.horizon
    cols: dict[str, np.ndarray] = {}
    for t in range(T):
        for h, coef in model.registry.injections.get((zone, t), {}).items():
            _, unit, role, _ = tags[h]
            name = f"{unit}:{role}"
            cols.setdefault(name, np.zeros(T))[t] += coef * solution.primal[h]
    names = sorted(cols)
    return names, np.column_stack([cols[n] for n in names]) if names else np.zeros((T, 0))


def write_dispatch(path, solution: Solution, model: Model, zone: str) -> Path:
    names, data = dispatch_table(solution, model, zone)
    return _write(path, ["hour", *names],
                  ((t, *(_fmt(v) for v in data[t])) for t in range(data.shape[0])))


def read_prices(path) -> PriceSeries:
    path = Path(path)
    zone = path.stem.removeprefix("prices_")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    try:
        vals = np.array([float(r["price"]) for r in rows])
    except (KeyError, ValueError) as exc:
        raise AnalyticsError(f"{path}: malformed price file ({exc})") from None
    return PriceSeries(zone, vals)
