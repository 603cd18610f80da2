"""Command-line front end: build, solve, analyse and verify a scenario.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 solver failure or infeasibility.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__, analytics
from .builders import BuildError, StructuralInfeasibility, assemble
from .cases import CASES, DEFAULT_HORIZON, make_cases
from .lp import DEFAULT_TOLERANCE, SOLVER_ENV, SOLVERS, SizeCapExceeded, SolverError, default_solver, solve, write_lp
from .scenario import Scenario, ScenarioError, load_scenario, restrict_zones

log = logging.getLogger("pricesteps")

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    scenario: Path
    out: Path
    horizon: int | None = None
    zones: tuple[str, ...] = ()
    solver: str | None = None
    tolerance: float = DEFAULT_TOLERANCE
    step_tol: float = 0.5
    min_step_hours: int = 5
    verify: bool = False
    export_lp: Path | None = None


def _load(cfg: RunConfig) -> Scenario:
    try:
        s = load_scenario(cfg.scenario, horizon=cfg.horizon)
        if cfg.zones:
            s = restrict_zones(s, cfg.zones)
    except (ScenarioError, FileNotFoundError) as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    return s


def _zone_ids(s: Scenario) -> list[str]:
    return [z.id for z in s.zones]


def run(cfg: RunConfig) -> dict:
    """Solve the scenario and write every artifact under ``cfg.out``; returns the manifest."""
    scenario = _load(cfg)
    try:
        model = assemble(scenario)
    except BuildError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    except StructuralInfeasibility as exc:
        raise CliError(EXIT_SOLVER, str(exc)) from None
    if cfg.export_lp:
        write_lp(model.lp, cfg.export_lp)
    solver = cfg.solver or default_solver()
    t0 = time.perf_counter()
    try:
        sol = solve(model.lp, solver=solver, tolerance=cfg.tolerance)
    except (SolverError, SizeCapExceeded) as exc:
        raise CliError(EXIT_SOLVER, str(exc)) from None
    wall = time.perf_counter() - t0
    if not sol.optimal:
        tags = "\n  ".join(map(str, sol.hint)) or "(no tag hint available)"
        raise CliError(EXIT_SOLVER, f"LP is {sol.status}; suspect rows:\n  {tags}")

    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    prices = {}
    files = []
    for zid in _zone_ids(scenario):
        pr = analytics.extract_prices(sol, model, zid)
        prices[zid] = pr
        curve = analytics.duration_curve(pr)
        steps = analytics.detect_steps(curve, cfg.step_tol, cfg.min_step_hours,
                                       analytics.predictions(scenario, zid))
        files += [analytics.write_prices(out / f"prices_{zid}.csv", pr),
                  analytics.write_duration(out / f"duration_{zid}.csv", curve),
                  analytics.write_steps(out / f"steps_{zid}.csv", steps),
                  analytics.write_dispatch(out / f"dispatch_{zid}.csv", sol, model, zid)]
    files.append(analytics.write_market_values(out / "market_values.csv",
                                               analytics.market_values(sol, prices, model)))
    for zone in scenario.zones:
        for g in zone.chp_systems:
            labels = analytics.classify_chp_states(sol, model, g.id, prices[zone.id], zone.id)
            files.append(analytics.write_chp_states(out / f"chp_states_{g.id}.csv", labels))

    manifest = {
        "tool": "pricesteps", "version": __version__,
        "scenario": str(cfg.scenario), "name": scenario.name, "horizon": scenario.horizon,
        "zones": _zone_ids(scenario), "solver": solver, "solver_message": sol.message,
        "tolerances": {"feasibility": cfg.tolerance, "step_level": cfg.step_tol,
                       "step_hours": cfg.min_step_hours},
        "objective": sol.objective, "wall_time_s": wall,
        "n_variables": model.lp.n_vars, "n_constraints": model.lp.n_cons,
        "files": sorted(p.name for p in files),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    log.info("objective %.6f in %.2fs with %s", sol.objective, wall, solver)
    return manifest


@dataclass
class VerifyReport:
    matched: list[dict]
    unmatched: list[dict]
    missing: list[str]

    @property
    def ok(self) -> bool:
        return not self.missing


def verify(cfg: RunConfig) -> VerifyReport:
    """Re-detect steps from the price files in ``cfg.out`` and match them to the oracle.

    The check fails when a step listed in the scenario's ``expected_steps``
    has no detected counterpart within ``cfg.step_tol``.
    """
    scenario = _load(cfg)
    matched, unmatched, found = [], [], set()
    for zid in _zone_ids(scenario):
        path = cfg.out / f"prices_{zid}.csv"
        if not path.exists():
            raise CliError(EXIT_INPUT, f"{path}: missing price file; run first")
        try:
            pr = analytics.read_prices(path)
        except analytics.AnalyticsError as exc:
            raise CliError(EXIT_INPUT, str(exc)) from None
        preds = analytics.predictions(scenario, zid)
        steps = analytics.detect_steps(analytics.duration_curve(pr), cfg.step_tol,
                                       cfg.min_step_hours, preds)
        for st in steps:
            row = {"zone": zid, "level": st.level, "hours": st.duration,
                   "source": st.matched_source, "deviation": st.deviation}
            (matched if st.matched_source else unmatched).append(row)
            if st.matched_source:
                found.add(st.matched_source)
    missing = [e for e in scenario.expected_steps if e not in found]
    return VerifyReport(matched, unmatched, missing)


def _print_report(rep: VerifyReport) -> None:
    for r in rep.matched:
        print(f"matched   {r['zone']:>4} {r['level']:12.6f} {r['hours']:5d} h  "
              f"{r['source']}  (dev {r['deviation']:+.3e})")
    for r in rep.unmatched:
        print(f"unmatched {r['zone']:>4} {r['level']:12.6f} {r['hours']:5d} h")
    for m in rep.missing:
        print(f"MISSING expected step {m}")
    print("verify: " + ("ok" if rep.ok else "FAILED"))


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pricesteps", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--scenario", required=True, type=Path, help="scenario directory")
        sp.add_argument("--out", type=Path, default=None, help="artifact directory")
        sp.add_argument("--horizon", type=int, default=None, help="truncate to the first N hours")
        sp.add_argument("--zones", default="", help="comma-separated zones to model")
        sp.add_argument("--step-tol", type=float, default=0.5, help="step level tolerance")
        sp.add_argument("--min-step-hours", type=int, default=5)

    r = sub.add_parser("run", help="solve a scenario and write CSV artifacts")
    common(r)
    r.add_argument("--solver", choices=SOLVERS, default=None,
                   help=f"LP backend (default: ${SOLVER_ENV} or highs)")
    r.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    r.add_argument("--verify", action="store_true", help="verify steps after the run")
    r.add_argument("--export-lp", type=Path, default=None, help="also write the LP file")

    v = sub.add_parser("verify", help="match detected steps in a run against the oracle")
    common(v)

    m = sub.add_parser("make-cases", help="write the bundled example scenarios")
    m.add_argument("--out", type=Path, default=Path("cases"))
    m.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    m.add_argument("names", nargs="*", help=f"subset of {', '.join(CASES)}")
    return p


def _config(a) -> RunConfig:
    out = a.out if a.out is not None else Path("runs") / a.scenario.name
    return RunConfig(scenario=a.scenario, out=out, horizon=a.horizon,
                     zones=tuple(z.strip() for z in a.zones.split(",") if z.strip()),
                     solver=getattr(a, "solver", None),
                     tolerance=getattr(a, "tolerance", DEFAULT_TOLERANCE),
                     step_tol=a.step_tol, min_step_hours=a.min_step_hours,
                     verify=getattr(a, "verify", False), export_lp=getattr(a, "export_lp", None))


def main(argv=None) -> int:
    a = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if a.command == "make-cases":
            for path in make_cases(a.out, a.names or None, a.horizon):
                print(path)
            return EXIT_OK
        cfg = _config(a)
        if a.command == "run":
            manifest = run(cfg)
            print(f"objective {manifest['objective']:.6f}  ({manifest['solver']}, "
                  f"{manifest['wall_time_s']:.2f}s) -> {cfg.out}")
            if not cfg.verify:
                return EXIT_OK
        rep = verify(cfg)
        _print_report(rep)
        return EXIT_OK if rep.ok else EXIT_VERIFY
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
