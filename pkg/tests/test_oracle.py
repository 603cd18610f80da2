import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pricesteps import oracle
from pricesteps.oracle import OpportunityPrediction, OracleError

P = 119.2

# Reference values below were evaluated once with exact rational arithmetic
# (fractions.Fraction) and frozen here.
CCGT = dict(eta_gen=0.56, ph=1.40, pl=0.10, eta_cb=0.93)
OCGT_CHP = dict(eta_gen=0.42, ph=0.86, pl=0.01, eta_cb=0.90)
SMALL_CHP = dict(eta_gen=0.46, ph=1.10, pl=0.00, eta_cb=0.93)


def test_thermal_marginal():
    assert oracle.thermal_marginal(P, 0.40) == pytest.approx(298.0, abs=1e-12)
    assert oracle.thermal_marginal(P, 1.0) == P
    assert oracle.thermal_marginal(P, 0.56) == pytest.approx(212.857142857142857, abs=1e-9)


def test_thermal_marginal_rejects_nonpositive_efficiency():
    with pytest.raises(OracleError):
        oracle.thermal_marginal(P, 0.0)


def test_ptg_willingness():
    assert oracle.ptg_willingness(114.0, 0.5925) == pytest.approx(67.545, abs=1e-12)
    assert oracle.ptg_willingness(114.0, 0.0) == 0.0
    assert oracle.ptg_willingness(100.0, 0.5) == 50.0
    with pytest.raises(OracleError):
        oracle.ptg_willingness(114.0, 1.0)


def test_storage_step():
    assert oracle.storage_step(298.0, 0.73) == pytest.approx(217.54, abs=1e-12)
    assert oracle.storage_step(298.0, 1.0) == 298.0
    # 298 x 0.92, the exact product
    assert oracle.storage_step(298.0, 0.92) == pytest.approx(274.16, abs=1e-12)
    with pytest.raises(OracleError):
        oracle.storage_step(298.0, 1.2)


def test_boiler_electric_step():
    assert oracle.boiler_electric_step(P, 0.93, 0.99) == pytest.approx(126.890322580645, abs=1e-9)
    assert oracle.boiler_electric_step(P, 0.90, 0.99) == pytest.approx(131.12, abs=1e-9)
    assert oracle.boiler_electric_step(P, 1.0, 1.0) == P


def test_chp_vs_fuel_boiler_rows():
    f = oracle.chp_vs_fuel_boiler
    assert f(P, CCGT["eta_gen"], CCGT["eta_cb"], CCGT["ph"], CCGT["pl"]) == pytest.approx(
        129.819969278034, abs=1e-9)
    v = f(P, OCGT_CHP["eta_gen"], OCGT_CHP["eta_cb"], OCGT_CHP["ph"], OCGT_CHP["pl"])
    assert v == pytest.approx(131.190402362495, abs=1e-9)
    assert v == pytest.approx(131.20, abs=0.011)  # quoted to two decimals as 131.20
    assert f(P, SMALL_CHP["eta_gen"], SMALL_CHP["eta_cb"], SMALL_CHP["ph"], SMALL_CHP["pl"]) == \
        pytest.approx(142.610395681924, abs=1e-9)
    assert f(P, 0.9, 0.9, 1.0, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_chp_ramp_terms():
    assert oracle.chp_vs_fuel_boiler_ramp(4.8, 1.4, 0.1) == pytest.approx(10.285714285714, abs=1e-9)
    assert oracle.chp_vs_fuel_boiler_ramp(4.8, 1.0, 0.0) == pytest.approx(9.6, abs=1e-12)
    assert oracle.chp_vs_fuel_boiler_ramp(0.0, 3.0, 0.2) == 0.0
    assert oracle.chp_vs_electric_backup_ramp(4.8, 1.4, 0.1, 0.99) == pytest.approx(
        5.974853310981, abs=1e-9)
    assert oracle.chp_vs_electric_backup_ramp(0.0, 1.0, 0.0, 1.0) == 0.0


def test_chp_vs_electric_backup_rows():
    f = oracle.chp_vs_electric_backup
    assert f(P, 0.56, 1.4, 0.1, 0.99) == pytest.approx(128.592120704107, abs=1e-9)
    assert f(P, 0.42, 0.86, 0.01, 4.0) == pytest.approx(220.962333762334, abs=1e-9)
    assert f(P, 0.56, 1.4, 0.1, 3.3) == pytest.approx(181.981494661922, abs=1e-9)
    limit = P / 0.56 + P * 0.1 / 1.4
    assert f(P, 0.56, 1.4, 0.1, 1e9) == pytest.approx(limit, abs=1e-4)


def test_case_g_heat_value():
    assert oracle.case_g_heat_value(P, 0.1, 0.56, 0.40) == pytest.approx(20.434285714286, abs=1e-9)
    assert oracle.case_g_heat_value(P, 0.0, 0.56, 0.40) == 0.0
    assert oracle.case_g_heat_value(P, 0.1, 0.40, 0.40) == pytest.approx(P * 0.1, abs=1e-12)


def test_vehicle_fuel_switch():
    assert oracle.vehicle_fuel_switch(100.0, 0.0006, 0.0002) == pytest.approx(300.0)
    with pytest.raises(OracleError):
        oracle.vehicle_fuel_switch(100.0, 0.0006, 0.0)


def test_prediction_levels_symmetric():
    p = OpportunityPrediction("x", {}, 100.0, 2.5)
    assert p.levels == (97.5, 100.0, 102.5)
    assert p.ramp_levels == (97.5, 102.5)
    assert OpportunityPrediction("y", {}, 5.0).levels == (5.0,)


positive = st.floats(0.05, 1.0)
prices = st.floats(1.0, 500.0)
scale = st.floats(0.1, 10.0)


@settings(max_examples=200, deadline=None)
@given(prices, scale, positive, positive, st.floats(0.3, 3.0), st.floats(0.0, 0.5),
       st.floats(0.5, 5.0))
def test_homogeneous_in_fuel_price(P, k, eta, eta_cb, ph, pl, eta_con):
    pairs = [
        (lambda p: oracle.thermal_marginal(p, eta)),
        (lambda p: oracle.ptg_willingness(p, min(eta, 0.99))),
        (lambda p: oracle.boiler_electric_step(p, eta_cb, eta_con)),
        (lambda p: oracle.chp_vs_fuel_boiler(p, eta, eta_cb, ph, pl)),
        (lambda p: oracle.chp_vs_electric_backup(p, eta, ph, pl, eta_con)),
        (lambda p: oracle.case_g_heat_value(p, pl, eta, eta_cb)),
    ]
    for f in pairs:
        assert f(k * P) == pytest.approx(k * f(P), rel=1e-12, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 20.0), scale, st.floats(0.3, 3.0), st.floats(0.0, 0.5), st.floats(0.5, 5.0))
def test_ramp_terms_homogeneous_and_related(lc, k, ph, pl, eta_con):
    a = oracle.chp_vs_fuel_boiler_ramp(lc, ph, pl)
    b = oracle.chp_vs_electric_backup_ramp(lc, ph, pl, eta_con)
    assert oracle.chp_vs_fuel_boiler_ramp(k * lc, ph, pl) == pytest.approx(k * a, rel=1e-12, abs=1e-12)
    assert b == pytest.approx(a / (1 + 1 / (ph * eta_con)), rel=1e-12, abs=1e-12)


def test_nonpositive_inputs_rejected():
    with pytest.raises(OracleError):
        oracle.chp_vs_fuel_boiler(P, 0.5, 0.9, 0.0, 0.1)
    with pytest.raises(OracleError):
        oracle.chp_vs_electric_backup(P, 0.5, 1.0, 0.1, 0.0)
    with pytest.raises(OracleError):
        oracle.case_g_heat_value(P, 0.1, 0.5, -1.0)
    assert math.isfinite(oracle.chp_vs_fuel_boiler(P, 0.5, 0.9, 1.0, 0.1))
