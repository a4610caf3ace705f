import csv
import subprocess
import sys
from importlib import resources

import numpy as np
import pytest

from tidalgrid.cli import main, parse_args
from tidalgrid.profiles import HOURS, write_profile_csv

TOY_CFG = str(resources.files("tidalgrid") / "data" / "toy.cfg")
FAST_PSO = ["--swarm-size", "6", "--max-iterations", "3"]


def read_csv(path):
    return list(csv.reader(path.open()))


def test_simulate_writes_all_outputs(tmp_path, capsys):
    assert main(["simulate", "--scenario", TOY_CFG, "--out", str(tmp_path), "--workers", "1"]) == 0
    assert "LCOE" in capsys.readouterr().out
    traces = read_csv(tmp_path / "traces.csv")
    assert len(traces) == HOURS + 1
    assert traces[0][:3] == ["hour", "demand_kW", "tidal_generation_kW"]
    summary = {(r[0], r[1]): r[2] for r in read_csv(tmp_path / "summary.csv")[1:]}
    breakdown = {r[0]: r[1] for r in read_csv(tmp_path / "breakdown.csv")[1:]}
    assert summary[("lcoe", "total")] == breakdown["total"]
    assert summary[("design", "p_tidal")] == "1700.0"


def test_empty_scenario_is_baseline(tmp_path):
    empty = tmp_path / "empty.cfg"
    empty.write_text("")
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    base_cfg = str(resources.files("tidalgrid") / "data" / "baseline.cfg")
    assert main(["simulate", "--scenario", str(empty), "--out", str(out_a), "--workers", "1"]) == 0
    assert main(["simulate", "--scenario", base_cfg, "--out", str(out_b), "--workers", "1"]) == 0
    assert (out_a / "summary.csv").read_bytes() == (out_b / "summary.csv").read_bytes()


def test_csv_profiles_override_scenario(tmp_path):
    demand = tmp_path / "load.csv"
    solar = tmp_path / "pv.csv"
    write_profile_csv(demand, np.ones(HOURS), header="load")
    write_profile_csv(solar, np.full(HOURS, 0.2))
    out = tmp_path / "out"
    argv = ["simulate", "--scenario", TOY_CFG, "--out", str(out), "--workers", "1",
            "--demand-csv", str(demand), "--solar-csv", str(solar), "--p-tidal", "0", "--p-solar", "100"]
    assert main(argv) == 0
    traces = read_csv(out / "traces.csv")
    # flat load scaled to 4.57 GWh
    assert float(traces[1][1]) == pytest.approx(4.57e6 / HOURS)
    assert float(traces[1][3]) == pytest.approx(20.0)


def test_grid(tmp_path):
    argv = ["grid", "--scenario", TOY_CFG, "--out", str(tmp_path), "--slice", "no-tidal",
            "--n-per-axis", "4", "--workers", "1"]
    assert main(argv) == 0
    rows = read_csv(tmp_path / "grid.csv")
    assert rows[0][:2] == ["p_solar", "span"] and len(rows) == 17
    assert (tmp_path / "summary.csv").exists()


def test_optimize(tmp_path):
    argv = ["optimize", "--scenario", TOY_CFG, "--out", str(tmp_path), "--workers", "1"] + FAST_PSO
    assert main(argv) == 0
    for name in ("traces.csv", "summary.csv", "breakdown.csv", "progress.csv"):
        assert (tmp_path / name).exists()
    assert read_csv(tmp_path / "progress.csv")[0] == ["iteration", "best_lcoe_usd_per_MWh"]


def test_sweep_default_twenty_steps(tmp_path):
    argv = ["sweep", "--scenario", TOY_CFG, "--out", str(tmp_path), "--component", "vrfb_module",
            "--workers", "1"] + FAST_PSO
    assert main(argv) == 0
    rows = read_csv(tmp_path / "sweep.csv")
    assert len(rows) == 21 and float(rows[1][0]) == 0.1 and float(rows[-1][0]) == 2.0


def test_optimize_same_seed_same_line(tmp_path, capsys):
    lines = []
    for rep in range(2):
        argv = ["optimize", "--scenario", TOY_CFG, "--out", str(tmp_path / str(rep)), "--seed", "42",
                "--workers", "1"] + FAST_PSO
        assert main(argv) == 0
        lines.append(capsys.readouterr().out)
    assert lines[0] == lines[1]


@pytest.mark.parametrize("argv", [
    [],
    ["simulate"],
    ["simulate", "--scenario", TOY_CFG],
    ["grid", "--scenario", TOY_CFG, "--out", "x", "--slice", "diagonal"],
    ["sweep", "--scenario", TOY_CFG, "--out", "x", "--component", "diesel"],
    ["simulate", "--scenario", TOY_CFG, "--out", "x", "--demand-csv", "a.csv", "--synth-demand", "4"],
    ["simulate", "--scenario", "missing.cfg", "--out", "x"],
    ["grid", "--scenario", TOY_CFG, "--out", "x", "--slice", "no-pv", "--n-per-axis", "1"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_unknown_section_is_usage_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[diesel]\ncost = 3\n")
    assert main(["simulate", "--scenario", str(cfg), "--out", str(tmp_path)]) == 2


def test_bad_profile_exits_1(tmp_path, capsys):
    bad = tmp_path / "short.csv"
    bad.write_text("1\n" * 100)
    argv = ["simulate", "--scenario", TOY_CFG, "--out", str(tmp_path / "o"), "--demand-csv", str(bad)]
    assert main(argv) == 1
    assert "8760" in capsys.readouterr().err


def test_bad_config_value_exits_1(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[demand]\ntoy = true\n[solar]\ntoy = true\n[lib]\nenergy_cost = cheap\n")
    assert main(["simulate", "--scenario", str(cfg), "--out", str(tmp_path / "o")]) == 1


def test_parse_args_sources(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("[demand]\ncsv = load.csv\n")
    rc = parse_args(["simulate", "--scenario", str(cfg), "--out", "o", "--synth-solar", "0.2"])
    assert rc.demand.kind == "csv" and rc.demand.value == tmp_path / "load.csv"
    assert rc.solar.kind == "synth" and rc.solar.value == 0.2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "tidalgrid", "simulate", "--scenario", TOY_CFG,
                           "--out", str(tmp_path), "--workers", "1"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("simulate: LCOE")
