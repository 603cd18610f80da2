import csv

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pricesteps import analytics
from pricesteps.analytics import (AnalyticsError, PriceSeries, capture_price, detect_steps,
                                  duration_curve)
from pricesteps.oracle import OpportunityPrediction


def test_duration_curve_sorts_descending():
    c = duration_curve([1.0, 3.0, 2.0])
    np.testing.assert_array_equal(c.values, [3.0, 2.0, 1.0])
    np.testing.assert_array_equal(c.hours, [1, 2, 0])


def test_duration_curve_ties_keep_hour_order():
    c = duration_curve(PriceSeries("DE", np.array([5.0, 7.0, 5.0, 7.0])))
    assert c.zone == "DE"
    np.testing.assert_array_equal(c.hours, [1, 3, 0, 2])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-500, 500, allow_nan=False), min_size=1, max_size=60))
def test_duration_curve_is_sorted_permutation(values):
    c = duration_curve(values)
    assert np.all(np.diff(c.values) <= 0)
    assert sorted(c.hours.tolist()) == list(range(len(values)))
    np.testing.assert_array_equal(np.asarray(values)[c.hours], c.values)


def test_detect_steps_finds_plateaus():
    curve = [300.0] * 6 + [298.0] * 10 + [150.0] * 2 + [67.5] * 5
    steps = detect_steps(curve, 0.5, 5)
    assert [(s.level, s.duration) for s in steps] == [(300.0, 6), (298.0, 10), (67.5, 5)]
    assert steps[1].start_rank == 6 and steps[1].end_rank == 15


def test_short_plateau_not_reported():
    assert detect_steps([10.0] * 4 + [1.0], 0.5, 5) == []


def test_detect_steps_rejects_unsorted():
    with pytest.raises(AnalyticsError):
        detect_steps([1.0, 2.0])


def test_steps_are_matched_to_predictions():
    preds = [OpportunityPrediction("thermal:ocgt", {}, 298.0, 9.6),
             OpportunityPrediction("ptg:ptg", {}, 67.545)]
    steps = detect_steps([307.6] * 5 + [298.0] * 5 + [200.0] * 5 + [67.6] * 5, 0.5, 5, preds)
    assert [s.matched_source for s in steps] == ["thermal:ocgt+ramp", "thermal:ocgt", None,
                                                 "ptg:ptg"]
    assert steps[3].deviation == pytest.approx(0.055)


def test_capture_price():
    prices = [10.0, 20.0, 60.0]
    assert capture_price([1.0, 1.0, 1.0], prices) == pytest.approx(30.0)
    assert capture_price([0.0, 0.0, 5.0], prices) == pytest.approx(60.0)
    assert capture_price([0.0, 0.0, 0.0], prices) is None


def test_flat_generator_captures_average(case):
    c = case("de_fr")
    pr = analytics.extract_prices(c.highs, c.model, "FR")
    report = analytics.market_values(c.highs, {"FR": pr}, c.model)
    cl = report.cluster("FR", "run_of_river")
    assert cl.capture_price == pytest.approx(report.average_price["FR"], rel=1e-12)


def test_market_values_balance_energy(case):
    c = case("res_ocgt")
    pr = analytics.extract_prices(c.highs, c.model, "DE")
    report = analytics.market_values(c.highs, pr, c.model)
    gen = sum(x.energy for x in report.clusters if x.direction == "generation")
    con = sum(x.energy for x in report.clusters if x.direction == "consumption")
    demand = float(np.sum(c.scenario.zone("DE").electricity_demand))
    assert gen == pytest.approx(demand + con, rel=1e-9)
    with pytest.raises(KeyError):
        report.cluster("DE", "nuclear")


def test_extract_prices_rejects_unknown_zone(case):
    c = case("res_ocgt")
    with pytest.raises(AnalyticsError):
        analytics.extract_prices(c.highs, c.model, "XX")


def test_chp_states_and_heat_values(case):
    c = case("chp")
    labels = analytics.classify_chp_states(c.highs, c.model, "chp_ccgt")
    assert len(labels) == c.scenario.horizon
    states = {l.state for l in labels}
    assert states - {"unclassified"}
    g = c.scenario.zone("DE").chp_systems[0]
    for l in labels:
        if l.state in "ABC":
            assert l.heat_value == pytest.approx(119.2 / 0.93)  # about 128.2
        if l.state == "G":
            assert l.heat_value == pytest.approx(20.434285714286, abs=1e-9)
        if l.state in "DEF":
            assert l.heat_value == pytest.approx(l.power_price / float(g.electric_backup_efficiency[l.hour]))
    with pytest.raises(AnalyticsError):
        analytics.classify_chp_states(c.highs, c.model, "nope")


def test_csv_round_trip(tmp_path):
    pr = PriceSeries("DE", np.array([298.0, -0.0000001, 4.58001]))
    path = analytics.write_prices(tmp_path / "prices_DE.csv", pr)
    text = path.read_text().splitlines()
    assert text == ["hour,price", "0,298.000000", "1,0.000000", "2,4.580010"]
    back = analytics.read_prices(path)
    assert back.zone == "DE"
    np.testing.assert_allclose(back.values, [298.0, 0.0, 4.58001])


def test_read_prices_malformed(tmp_path):
    p = tmp_path / "prices_DE.csv"
    p.write_text("hour,price\n0,abc\n")
    with pytest.raises(AnalyticsError, match="malformed"):
        analytics.read_prices(p)


def test_duration_and_steps_csv(tmp_path):
    curve = duration_curve([1.0, 3.0, 2.0, 3.0, 3.0, 3.0, 3.0])
    rows = list(csv.DictReader(analytics.write_duration(tmp_path / "d.csv", curve).open()))
    assert [int(r["hour"]) for r in rows] == [1, 3, 4, 5, 6, 2, 0]
    steps = detect_steps(curve, 0.5, 5)
    rows = list(csv.DictReader(analytics.write_steps(tmp_path / "s.csv", steps).open()))
    assert rows == [{"level": "3.000000", "start_rank": "0", "end_rank": "4", "duration": "5",
                     "matched_source": "", "deviation": ""}]


def test_dispatch_table_balances(case):
    c = case("de_fr")
    for zone in ("DE", "FR"):
        names, data = analytics.dispatch_table(c.highs, c.model, zone)
        assert any(n.endswith(":FLOW") for n in names)
        np.testing.assert_allclose(data.sum(axis=1), c.scenario.zone(zone).electricity_demand,
                                   atol=1e-6)
