import json
import subprocess
import sys

import numpy as np
import pytest

from stablecir.cli import run
from stablecir.simulate import read_path

PARAMS = {"a": 1.0, "b": 1.0, "sigma": 1.0, "delta": 1.0, "alpha": 1.5, "y0": 1.0}


def write_cfg(tmp_path, name, data):
    target = tmp_path / name
    target.write_text(json.dumps(data))
    return str(target)


def test_simulate_zero_path(tmp_path):
    cfg = write_cfg(tmp_path, "sim.json", {"version": 1, "params": PARAMS | {"a": 0.0, "y0": 0.0},
                                           "T": 1.0, "n_steps": 100})
    out = tmp_path / "zero.csv"
    assert run(["simulate", "--config", cfg, "--out", str(out), "--seed", "3"]) == 0
    path = read_path(out)
    assert np.all(path.values == 0.0)
    assert json.loads((tmp_path / "zero.json").read_text())["seed"] == 3


def test_simulate_then_estimate(tmp_path):
    cfg = write_cfg(tmp_path, "sim.json", {"version": 1, "params": PARAMS, "T": 5.0, "n_steps": 5000})
    out = tmp_path / "p.csv"
    assert run(["simulate", "--config", cfg, "--out", str(out)]) == 0
    est = write_cfg(tmp_path, "est.json", {"version": 1, "path": "p.csv", "b_true": 1.0})
    rep_file = tmp_path / "rep.json"
    assert run(["estimate", "--config", est, "--out", str(rep_file)]) == 0
    rep = json.loads(rep_file.read_text())
    assert rep["method"] == "full" and np.isfinite(rep["b_hat"])
    assert rep["scaled_error_random"] is not None


def test_byte_determinism(tmp_path):
    cfg = write_cfg(tmp_path, "sim.json", {"version": 1, "params": PARAMS, "T": 1.0, "n_steps": 500})
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["simulate", "--config", cfg, "--out", str(a), "--seed", "9"])
    run(["simulate", "--config", cfg, "--out", str(b), "--seed", "9"])
    assert a.read_bytes() == b.read_bytes()


def test_laplace_stationary_at_zero(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "lap.json", {"version": 1, "params": PARAMS, "kind": "stationary",
                                           "lambda": 0.0})
    assert run(["laplace", "--config", cfg]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == 1.0
    assert out["query"]["kind"] == "stationary"


@pytest.mark.parametrize("query", [
    {"kind": "Y", "lambda": 1.0, "t": 2.0},
    {"kind": "joint", "u": -1.0, "v": -0.5, "t": 1.0},
    {"kind": "V", "u": -1.0},
])
def test_laplace_kinds(tmp_path, capsys, query):
    params = PARAMS | ({"b": -1.0} if query["kind"] == "V" else {})
    cfg = write_cfg(tmp_path, "lap.json", {"version": 1, "params": params} | query)
    assert run(["laplace", "--config", cfg]) == 0
    assert 0 < json.loads(capsys.readouterr().out)["value"] < 1


def test_experiment_outputs(tmp_path):
    cfg = write_cfg(tmp_path, "exp.json", {"version": 1, "params": PARAMS, "T_grid": [1.0, 2.0],
                                           "dt": 0.01, "n_reps": 4})
    stem = tmp_path / "run"
    assert run(["experiment", "--config", cfg, "--out", str(stem), "--workers", "2"]) == 0
    rows = (tmp_path / "run.csv").read_text().splitlines()
    assert len(rows) == 9
    summary = json.loads((tmp_path / "run.json").read_text())
    assert summary["config"]["n_reps"] == 4


def test_oracle_check(capsys):
    assert run(["oracle-check"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-1] == "150/150 passed"
    assert not any(line.endswith("FAIL") for line in out)


@pytest.mark.parametrize("data", [
    {"version": 1, "params": PARAMS, "T": 1.0, "n_steps": 10, "bogus": 1},
    {"version": 2, "params": PARAMS, "T": 1.0, "n_steps": 10},
    {"version": 1, "params": PARAMS | {"alpha": 2.5}, "T": 1.0, "n_steps": 10},
    {"version": 1, "params": PARAMS, "T": -1.0, "n_steps": 10},
    {"version": 1, "params": PARAMS, "n_steps": 10},
])
def test_invalid_config_exit_1_without_output(tmp_path, capsys, data):
    cfg = write_cfg(tmp_path, "bad.json", data)
    out = tmp_path / "never.csv"
    assert run(["simulate", "--config", cfg, "--out", str(out)]) == 1
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and err[0].startswith("error: ")
    assert not out.exists() and not (tmp_path / "never.json").exists()
    assert [p.name for p in tmp_path.iterdir()] == ["bad.json"]


def test_usage_errors(tmp_path, capsys):
    assert run([]) == 1
    assert run(["frobnicate"]) == 1
    assert run(["simulate", "--config", str(tmp_path / "missing.json")]) == 1
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(["laplace", "--config", str(broken)]) == 1


def test_numeric_fault_exit_2(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "oc.json", {"version": 1, "rtol": 1e-30, "residual_tol": 1e-30})
    assert run(["oracle-check", "--config", cfg]) == 2
    assert capsys.readouterr().err.startswith("numeric-fault: ")


def test_module_entry_point(tmp_path):
    cfg = write_cfg(tmp_path, "lap.json", {"version": 1, "params": PARAMS, "kind": "stationary",
                                           "lambda": 1.0})
    proc = subprocess.run([sys.executable, "-m", "stablecir", "laplace", "--config", cfg,
                           "--format", "csv"], capture_output=True, text=True, check=True)
    header, values = proc.stdout.splitlines()
    assert header == "kind,value" and values.startswith("stationary,0.")
