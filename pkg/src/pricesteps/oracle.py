"""Closed-form opportunity costs that predict price-duration steps.

Every function is homogeneous of degree one in the fuel price (and in the
ramp cost for the ramp formulas). Units: fuel prices in EUR/MWh_th, results
in EUR/MWh_el unless stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class OracleError(ValueError):
    pass


def _positive(**kw) -> None:
    for name, v in kw.items():
        if not v > 0:
            raise OracleError(f"{name} must be > 0, got {v}")


@dataclass(frozen=True)
class OpportunityPrediction:
    """A predicted price level plus its symmetric ramp-adjusted neighbours."""

    formula: str
    inputs: dict = field(compare=False)
    level: float
    ramp: float = 0.0
    unit: str = "EUR/MWh_el"

    @property
    def ramp_levels(self) -> tuple[float, float]:
        return (self.level - self.ramp, self.level + self.ramp)

    @property
    def levels(self) -> tuple[float, ...]:
        if self.ramp == 0.0:
            return (self.level,)
        return (self.level - self.ramp, self.level, self.level + self.ramp)


def thermal_marginal(P: float, eta: float) -> float:
    """Fuel cost per MWh_el of a plant with efficiency ``eta``."""
    _positive(eta=eta)
    return P / eta


def ptg_willingness(P_domestic: float, PF: float) -> float:
    """Highest power price at which power-to-gas still runs."""
    if not 0 <= PF < 1:
        raise OracleError(f"PF must lie in [0, 1), got {PF}")
    return P_domestic * PF


def storage_step(marginal: float, roundtrip: float) -> float:
    """Charging-side price of a store discharging against ``marginal``."""
    if not 0 < roundtrip <= 1:
        raise OracleError(f"roundtrip must lie in (0, 1], got {roundtrip}")
    return marginal * roundtrip


def boiler_electric_step(P: float, eta_cb: float, eta_con: float) -> float:
    """Indifference price between a fuel boiler and an electric boiler."""
    _positive(eta_cb=eta_cb)
    return P / eta_cb * eta_con


def chp_vs_fuel_boiler(P: float, eta_gen: float, eta_cb: float, ph: float, pl: float) -> float:
    """CHP on its backpressure line trading heat against the fuel boiler."""
    _positive(eta_gen=eta_gen, eta_cb=eta_cb, ph=ph)
    return P / eta_gen - P / (eta_cb * ph) + P * pl / ph


def chp_vs_fuel_boiler_ramp(lc_cost: float, ph: float, pl: float) -> float:
    _positive(ph=ph)
    return 2.0 * lc_cost * (1.0 + pl / ph)


def chp_vs_electric_backup(P: float, eta_gen: float, ph: float, pl: float,
                           eta_con: float) -> float:
    """CHP on its backpressure line trading heat against the electric backup."""
    _positive(eta_gen=eta_gen, ph_eta_con=ph * eta_con)
    return (P / eta_gen + P * pl / ph) / (1.0 + 1.0 / (ph * eta_con))


def chp_vs_electric_backup_ramp(lc_cost: float, ph: float, pl: float, eta_con: float) -> float:
    _positive(ph_eta_con=ph * eta_con)
    return 2.0 * lc_cost * (1.0 + pl / ph) / (1.0 + 1.0 / (ph * eta_con))


def case_g_heat_value(P: float, pl: float, eta_gen_chp: float, eta_ocgt: float) -> float:
    """Heat value (EUR/MWh_th) of a CHP at full load while the OCGT sets the price."""
    _positive(eta_gen_chp=eta_gen_chp, eta_ocgt=eta_ocgt)
    return P * pl * (1.0 + 1.0 / eta_ocgt - 1.0 / eta_gen_chp)


def vehicle_fuel_switch(P: float, fuel_per_km: float, electricity_per_km: float) -> float:
    """Power price above which a plug-in hybrid prefers its combustion engine.

    Fuel cost per km divided by electricity per km.
    """
    _positive(electricity_per_km=electricity_per_km)
    return P * fuel_per_km / electricity_per_km
