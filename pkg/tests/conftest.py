from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from pricesteps.builders import assemble
from pricesteps.cases import CASES, _fix
from pricesteps.lp import solve
from pricesteps.scenario import (Market, RenewableUnit, Scenario, ThermalUnit, Zone,
                                 load_scenario)

ROOT = Path(__file__).resolve().parents[1]
CASES_DIR = ROOT / "cases"


def flat(T, v):
    a = np.full(T, float(v))
    a.setflags(write=False)
    return a


def arr(values):
    a = np.asarray(values, dtype=float)
    a.setflags(write=False)
    return a


def ocgt(T, lc=4.8, uid="ocgt", eta=0.40):
    return ThermalUnit(uid, math.inf, eta, flat(T, 1.0), lc, 0.0, None, "ocgt")


def one_zone(demand, *, zid="DE", P=119.2, Pd=114.0, name="toy", **units) -> Scenario:
    demand = arr(demand)
    T = len(demand)
    units = {k: tuple(_fix(u, T) for u in v) for k, v in units.items()}
    return Scenario(horizon=T, fuel_price_import=P, fuel_price_domestic=Pd,
                    zones=(Zone(zid, demand, **units),), interconnectors=(), timeseries={},
                    name=name)


class Solved:
    """A bundled case with its model and solutions, built lazily."""

    def __init__(self, name: str):
        self.name = name
        self.scenario = load_scenario(CASES_DIR / name)
        self.model = assemble(self.scenario)
        self._sol = {}

    def solution(self, solver: str = "highs"):
        if solver not in self._sol:
            self._sol[solver] = solve(self.model.lp, solver=solver)
        return self._sol[solver]

    @property
    def highs(self):
        return self.solution("highs")

    @property
    def simplex(self):
        return self.solution("simplex")


_CACHE: dict[str, Solved] = {}

# criterion number -> one-line verdict, filled by test_acceptance
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])


@pytest.fixture(scope="session")
def case():
    def get(name: str) -> Solved:
        if name not in _CACHE:
            _CACHE[name] = Solved(name)
        return _CACHE[name]
    return get


@pytest.fixture(scope="session")
def case_names():
    return list(CASES)
