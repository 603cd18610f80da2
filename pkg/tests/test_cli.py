import json
import shutil
import subprocess
import sys

import pytest

from pricesteps.cli import EXIT_INPUT, EXIT_OK, EXIT_SOLVER, EXIT_VERIFY, main

from conftest import CASES_DIR


def _files(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir()) if p.name != "manifest.json"}


def test_run_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["run", "--scenario", str(CASES_DIR / "ptg"), "--out", str(out), "--verify"]) == EXIT_OK
    names = set(_files(out))
    assert {"prices_DE.csv", "duration_DE.csv", "steps_DE.csv", "dispatch_DE.csv",
            "market_values.csv"} <= names
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["solver"] == "highs" and manifest["horizon"] == 168
    assert sorted(manifest["files"]) == sorted(names)
    assert "verify: ok" in capsys.readouterr().out


def test_chp_states_file(tmp_path):
    out = tmp_path / "run"
    assert main(["run", "--scenario", str(CASES_DIR / "chp"), "--out", str(out)]) == EXIT_OK
    assert (out / "chp_states_chp_ccgt.csv").read_text().startswith("hour,state,heat_value")


def test_reruns_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["run", "--scenario", str(CASES_DIR / "hydro"), "--out", str(d),
                     "--solver", "simplex"]) == EXIT_OK
    assert _files(a) == _files(b)


def test_tampered_prices_fail_verification(tmp_path):
    out = tmp_path / "run"
    assert main(["run", "--scenario", str(CASES_DIR / "ptg"), "--out", str(out)]) == EXIT_OK
    assert main(["verify", "--scenario", str(CASES_DIR / "ptg"), "--out", str(out)]) == EXIT_OK
    p = out / "prices_DE.csv"
    lines = p.read_text().splitlines()
    lines = [lines[0]] + [f"{t},500.000000" for t in range(len(lines) - 1)]
    p.write_text("\n".join(lines) + "\n")
    assert main(["verify", "--scenario", str(CASES_DIR / "ptg"), "--out", str(out)]) == EXIT_VERIFY


def test_verify_without_run(tmp_path):
    assert main(["verify", "--scenario", str(CASES_DIR / "ptg"),
                 "--out", str(tmp_path / "none")]) == EXIT_INPUT


def test_missing_scenario(tmp_path, capsys):
    assert main(["run", "--scenario", str(tmp_path / "nope")]) == EXIT_INPUT
    assert "missing file" in capsys.readouterr().err


def test_invalid_scenario(tmp_path):
    bad = tmp_path / "bad"
    shutil.copytree(CASES_DIR / "res_ocgt", bad)
    conf = bad / "scenario.conf"
    conf.write_text(conf.read_text().replace("efficiency: 0.4", "efficiency: 1.4"))
    assert main(["run", "--scenario", str(bad), "--out", str(tmp_path / "o")]) == EXIT_INPUT


def test_infeasible_scenario(tmp_path, capsys):
    bad = tmp_path / "bad"
    shutil.copytree(CASES_DIR / "hydro", bad)
    conf = bad / "scenario.conf"
    text = conf.read_text()
    # OCGT capacity 0 leaves peak hours without enough supply
    text = text.replace("capacity: .inf", "capacity: 0.0", 1)
    conf.write_text(text)
    code = main(["run", "--scenario", str(bad), "--out", str(tmp_path / "o")])
    assert code == EXIT_SOLVER
    assert "infeasible" in capsys.readouterr().err


def test_size_cap_is_solver_error(tmp_path):
    code = main(["run", "--scenario", str(CASES_DIR / "all_de"), "--out", str(tmp_path / "o"),
                 "--solver", "simplex"])
    assert code == EXIT_SOLVER


def test_zone_restriction(tmp_path):
    out = tmp_path / "fr"
    assert main(["run", "--scenario", str(CASES_DIR / "de_fr"), "--out", str(out),
                 "--zones", "FR"]) == EXIT_OK
    assert (out / "prices_FR.csv").exists() and not (out / "prices_DE.csv").exists()
    assert main(["run", "--scenario", str(CASES_DIR / "de_fr"), "--out", str(out),
                 "--zones", "XX"]) == EXIT_INPUT


def test_horizon_and_export(tmp_path):
    out = tmp_path / "short"
    lp = tmp_path / "m.lp"
    assert main(["run", "--scenario", str(CASES_DIR / "res_ocgt"), "--out", str(out),
                 "--horizon", "24", "--export-lp", str(lp)]) == EXIT_OK
    assert len((out / "prices_DE.csv").read_text().splitlines()) == 25
    assert lp.read_text().startswith("\\ res_ocgt")


def test_make_cases(tmp_path):
    assert main(["make-cases", "--out", str(tmp_path), "ptg"]) == EXIT_OK
    assert (tmp_path / "ptg" / "scenario.conf").read_bytes() == \
        (CASES_DIR / "ptg" / "scenario.conf").read_bytes()
    assert (tmp_path / "ptg" / "timeseries" / "profiles.csv").read_bytes() == \
        (CASES_DIR / "ptg" / "timeseries" / "profiles.csv").read_bytes()
    assert main(["make-cases", "--out", str(tmp_path), "nope"]) == EXIT_INPUT


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "pricesteps.cli", "run", "--scenario",
                        str(CASES_DIR / "battery"), "--out", str(tmp_path / "b"), "--verify"],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert "verify: ok" in r.stdout


def test_bad_arguments():
    with pytest.raises(SystemExit) as exc:
        main(["run"])
    assert exc.value.code == 2
