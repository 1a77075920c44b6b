import json
import subprocess
import sys

import numpy as np
import pytest

from flexramp.cli import main
from flexramp.damarket import MODE_GENERAL
from flexramp.errors import ParseError, ValidationError
from flexramp.evaluate import ModeMetrics, clear_da_for_mode
from flexramp.fixtures import toy_system
from flexramp.io import (RunConfig, read_aggregate_json, read_per_scenario_csv,
                         read_scenarios_csv, read_schema_kind,
                         write_aggregate_json, write_da_solution_csv,
                         write_da_summary_json, write_per_scenario_csv,
                         write_prices_csv, write_scenarios_csv,
                         write_settlement_csv)
from flexramp.pricing import (compute_settlements, fix_and_price,
                              verify_pricing_identities)
from flexramp.rtuc import Scenario
from flexramp.solver import SolveOptions
from flexramp.system import system_to_dict

from conftest import flat_profile


# -- run configuration -----------------------------------------------------------

def test_config_defaults_and_override():
    cfg = RunConfig()
    assert cfg.modes == ["none", "general", "enhanced"]
    assert cfg.voll == 10000.0 and cfg.scenarios == 500
    cfg.override(voll=2000.0, seed=None, outdir="elsewhere")
    assert cfg.voll == 2000.0 and cfg.seed == 0 and cfg.outdir == "elsewhere"


def test_config_from_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"system": "sys.json", "voll": 500.0,
                                "modes": ["none"], "scenarios": 7}))
    cfg = RunConfig.from_file(path)
    assert cfg.system == "sys.json" and cfg.voll == 500.0
    assert cfg.modes == ["none"] and cfg.scenarios == 7
    assert cfg.mip_gap == 1e-3                       # untouched default

    path.write_text(json.dumps({"volll": 500.0}))
    with pytest.raises(ParseError, match=r"unknown keys \['volll'\]"):
        RunConfig.from_file(path)
    path.write_text("{not json")
    with pytest.raises(ParseError, match="not valid JSON"):
        RunConfig.from_file(path)
    with pytest.raises(ParseError, match="cannot read config"):
        RunConfig.from_file(tmp_path / "absent.json")


def test_config_path_validation(tmp_path):
    with pytest.raises(ValidationError, match="missing the system"):
        RunConfig().validate_paths()
    sys_path = tmp_path / "s.json"
    sys_path.write_text("{}")
    cfg = RunConfig(system=str(sys_path), profile=str(tmp_path / "nope.csv"))
    with pytest.raises(ParseError, match="profile file not found"):
        cfg.validate_paths()


# -- artifact round trips ----------------------------------------------------------

def test_scenarios_csv_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    scen = [Scenario(id=i, seed=9, quarters=rng.uniform(50, 150, 12))
            for i in range(4)]
    path = tmp_path / "scenarios.csv"
    write_scenarios_csv(path, scen)
    assert read_schema_kind(path) == "scenarios/v1"

    back = read_scenarios_csv(path)
    assert [s.id for s in back] == [0, 1, 2, 3]
    for orig, rt in zip(scen, back):
        assert np.array_equal(orig.quarters, rt.quarters)   # repr round-trip

    with pytest.raises(ValidationError, match="no scenarios"):
        write_scenarios_csv(tmp_path / "none.csv", [])
    with pytest.raises(ParseError, match="expected per-scenario schema"):
        read_per_scenario_csv(path)


def test_per_scenario_round_trip(tmp_path):
    mm = ModeMetrics(mode="general", scenario_ids=np.arange(3),
                     violation_mwh=np.array([0.0, 1.25, 0.5]),
                     cost_excl=np.array([10.0, 11.5, 12.0]),
                     cost_incl=np.array([10.0, 24.0, 17.0]),
                     fs_increase=np.array([0.0, 2.0, 0.0]),
                     spike_count=np.array([0, 3, 1]),
                     max_lmp=np.zeros((3, 4)), da_objective=5.0)
    path = tmp_path / "per_scenario.csv"
    write_per_scenario_csv(path, {"general": mm})
    out = read_per_scenario_csv(path)
    assert list(out) == ["general"]
    assert out["general"]["scenario"] == [0, 1, 2]
    assert out["general"]["violation_mwh"] == [0.0, 1.25, 0.5]
    assert out["general"]["spike_count"] == [0, 3, 1]

    with pytest.raises(ParseError, match="expected scenarios schema"):
        read_scenarios_csv(path)


def test_aggregate_json_round_trip_and_determinism(tmp_path):
    class Stub:
        def to_dict(self):
            return {"voll": 1000.0, "modes": {"none": {"x": np.float64(1.5)}},
                    "ids": np.arange(3)}

    p1, p2 = tmp_path / "a1.json", tmp_path / "a2.json"
    write_aggregate_json(p1, Stub())
    write_aggregate_json(p2, Stub())
    assert p1.read_bytes() == p2.read_bytes()
    doc = read_aggregate_json(p1)
    assert doc["modes"]["none"]["x"] == 1.5
    assert doc["ids"] == [0, 1, 2]

    p1.write_text("{broken")
    with pytest.raises(ParseError, match="not valid JSON"):
        read_aggregate_json(p1)
    with pytest.raises(ParseError, match="cannot read"):
        read_aggregate_json(tmp_path / "missing.json")


def test_da_artifacts_have_schemas_and_rows(tmp_path):
    system = toy_system()
    profile = flat_profile(3, 90.0, sigma=2.0)
    opts = SolveOptions(mip_gap=1e-6, time_limit=60)
    da, sol = clear_da_for_mode(system, profile, MODE_GENERAL, options=opts)
    prices = fix_and_price(da, sol, opts)
    settle = compute_settlements(da, sol, prices)
    identities = verify_pricing_identities(da, sol, prices)

    sol_path = tmp_path / "da_solution_general.csv"
    write_da_solution_csv(sol_path, da, sol)
    assert read_schema_kind(sol_path) == "da-solution/v1"
    lines = [l for l in sol_path.read_text().splitlines()
             if l and not l.startswith("#")]
    assert lines[0].split(",")[:4] == ["gen", "hour", "P", "u"]
    assert len(lines) == 1 + 3 * 3                   # header + gens x hours

    prices_path = tmp_path / "da_prices_general.csv"
    write_prices_csv(prices_path, da, prices)
    assert read_schema_kind(prices_path) == "da-prices/v1"
    body = prices_path.read_text()
    for series in ("lmp", "lambda", "pi_up", "pi_down"):
        assert series in body

    settle_path = tmp_path / "da_settlement_general.csv"
    write_settlement_csv(settle_path, settle)
    assert read_schema_kind(settle_path) == "da-settlement/v1"

    summary_path = tmp_path / "da_summary_general.json"
    from flexramp.damarket import production_cost
    write_da_summary_json(summary_path, MODE_GENERAL, sol, settle, identities,
                          production_cost(system, sol))
    doc = json.loads(summary_path.read_text())
    assert doc["mode"] == "general"
    assert doc["objective"] == sol.objective
    assert doc["pricing_identities"]["ok"] is True


# -- command line -----------------------------------------------------------------

@pytest.fixture
def cli_inputs(tmp_path):
    sys_path = tmp_path / "system.json"
    sys_path.write_text(json.dumps(system_to_dict(toy_system())))
    prof_path = tmp_path / "profile.csv"
    rows = ["hour,net_load,sigma"]
    for h, (load, sig) in enumerate([(88.0, 2.0), (92.0, 2.0), (90.0, 2.0)], 1):
        rows.append(f"{h},{load},{sig}")
    prof_path.write_text("\n".join(rows) + "\n")
    return str(sys_path), str(prof_path)


def test_cli_run_da(cli_inputs, tmp_path, capsys):
    sys_path, prof_path = cli_inputs
    out = tmp_path / "da_out"
    rc = main(["run-da", "--system", sys_path, "--profile", prof_path,
               "--outdir", str(out), "--mode", "none", "--mode", "general",
               "--mip-gap", "1e-6"])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "run-da none: objective" in printed
    assert "run-da general: objective" in printed
    for stem in ("da_solution", "da_prices", "da_settlement"):
        assert (out / f"{stem}_none.csv").exists()
        assert (out / f"{stem}_general.csv").exists()
    assert (out / "da_summary_general.json").exists()


def test_cli_validate_then_report(cli_inputs, tmp_path, capsys):
    sys_path, prof_path = cli_inputs
    out = tmp_path / "val_out"
    argv = ["validate", "--system", sys_path, "--profile", prof_path,
            "--outdir", str(out), "--mode", "none", "--mode", "general",
            "--scenarios", "3", "--seed", "2", "--voll", "2000",
            "--voll-sweep", "500,2000", "--mip-gap", "1e-6"]
    assert main(argv) == 0
    assert "validate general: 3 scenarios" in capsys.readouterr().out
    for name in ("scenarios.csv", "per_scenario.csv", "aggregate.json"):
        assert (out / name).exists()

    # reruns are byte-identical artifact for artifact
    out2 = tmp_path / "val_out2"
    argv2 = argv[:argv.index(str(out))] + [str(out2)] + argv[argv.index(str(out)) + 1:]
    assert main(argv2) == 0
    for name in ("scenarios.csv", "per_scenario.csv", "aggregate.json"):
        assert (out / name).read_bytes() == (out2 / name).read_bytes()

    rep = tmp_path / "report_out"
    assert main(["report", "--artifacts", str(out), "--out", str(rep)]) == 0
    report = (rep / "report.md").read_text()
    assert report.startswith("# Flexible ramping design validation")
    assert "general" in report and "none" in report
    assert (rep / "scatter_violation_cost.csv").exists()
    assert (rep / "scatter_violation_fs.csv").exists()


def test_cli_input_errors(cli_inputs, tmp_path, capsys):
    sys_path, prof_path = cli_inputs
    # missing profile file
    rc = main(["run-da", "--system", sys_path, "--profile",
               str(tmp_path / "ghost.csv"), "--outdir", str(tmp_path / "o")])
    assert rc == 1
    assert "ghost.csv" in capsys.readouterr().err
    # config with unknown key
    bad_cfg = tmp_path / "bad.json"
    bad_cfg.write_text(json.dumps({"systemm": "x"}))
    rc = main(["run-da", "--config", str(bad_cfg)])
    assert rc == 1
    assert "unknown keys" in capsys.readouterr().err
    # report on an empty directory names what is missing
    rc = main(["report", "--artifacts", str(tmp_path / "empty")])
    assert rc == 1
    err = capsys.readouterr().err
    assert "missing validation artifacts" in err and "aggregate.json" in err


def test_cli_infeasible_exits_2(cli_inputs, tmp_path, capsys):
    sys_path, _ = cli_inputs
    prof_path = tmp_path / "huge.csv"
    prof_path.write_text("hour,net_load\n1,9000\n2,9000\n")
    rc = main(["run-da", "--system", sys_path, "--profile", str(prof_path),
               "--outdir", str(tmp_path / "o"), "--mode", "none"])
    assert rc == 2
    assert "infeasible" in capsys.readouterr().err


def test_cli_module_entry_point(cli_inputs, tmp_path):
    sys_path, prof_path = cli_inputs
    out = tmp_path / "sub_out"
    proc = subprocess.run(
        [sys.executable, "-m", "flexramp.cli", "run-da", "--system", sys_path,
         "--profile", prof_path, "--outdir", str(out), "--mode", "none"],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "run-da none: objective" in proc.stdout
    assert (out / "da_solution_none.csv").exists()
