import json
import math
import subprocess
import sys

import pytest

from spinsoliton import cli
from spinsoliton.errors import NumericBlowupError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_coeffs_defaults(capsys):
    code, out, _ = run(capsys, "coeffs")
    assert code == 0
    rows = dict(line.split(None, 1) for line in out.splitlines())
    assert rows["c1"] == "0.09850499334"
    assert rows["V"] == "101.9700999"
    assert rows["regime"] == "Bright"


def test_coeffs_dark(capsys):
    code, out, _ = run(capsys, "coeffs", "--theta", "1.5")
    assert code == 0 and "Dark" in out


def test_coeffs_invalid(capsys):
    code, _, err = run(capsys, "coeffs", "--J", "-1")
    assert code == 1 and "J" in err


def test_unknown_flag(capsys):
    code, _, err = run(capsys, "coeffs", "--colour", "red")
    assert code == 1 and "unrecognized" in err


def test_missing_command(capsys):
    assert run(capsys)[0] == 1


def test_experiment_fig1a_writes_files(capsys, tmp_path):
    code, out, _ = run(capsys, "experiment", "--preset", "fig1a", "--out", str(tmp_path))
    assert code == 0
    assert "PASS" in out and "FAIL" not in out
    for name in ("analytic.csv", "analytic.json", "report.json"):
        assert (tmp_path / name).exists()
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["passed"] is True


def test_simulate_step_too_large(capsys):
    code, _, err = run(capsys, "simulate", "--preset", "fig1a", "--model", "nls",
                       "--dt", "1.0")
    assert code == 1 and "error" in err


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("preset = fig1a\nmodel = nls\nt_end = 0.05\nsnapshots = 0, 0.05\n"
                   "n_points = 256\n")
    code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--theta", "0.2",
                       "--out", str(tmp_path / "o"), "--heatmap")
    assert code == 0
    assert "theta = 0.2" in out
    assert (tmp_path / "o" / "trajectory.csv").exists()
    assert (tmp_path / "o" / "trajectory.pgm").exists()


def test_config_file_error(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("preset = fig1a\nJ = -1\n")
    code, _, err = run(capsys, "simulate", "--config", str(cfg))
    assert code == 1 and "line 2" in err


def test_compare_table(capsys):
    code, out, _ = run(capsys, "compare", "--preset", "fig1a", "--model", "nls",
                       "--t_end", "0.1", "--snapshots", "0,0.1", "--n_points", "1024")
    assert code == 0
    rows = out.splitlines()[-2:]
    assert float(rows[0].split()[1]) == 0.0
    assert float(rows[1].split()[1]) < 1e-3


def test_sweep_output(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--preset", "fig1a", "--model", "nls",
                       "--t_end", "0.02", "--snapshots", "0,0.02", "--n_points", "256",
                       "--axis", "theta", "--values", "0.1,1.5", "--out", str(tmp_path))
    assert code == 0 and "Bright" in out and "Dark" in out
    assert len(json.loads((tmp_path / "sweep.json").read_text())["rows"]) == 2


def test_blowup_exit_code(capsys, monkeypatch):
    def boom(cfg):
        raise NumericBlowupError("amplitude blow-up", time=1.0, index=3)
    monkeypatch.setattr(cli, "simulate", boom)
    code, _, err = run(capsys, "simulate", "--preset", "fig1a")
    assert code == 2 and "blow-up" in err


def test_stdout_deterministic(capsys):
    first = run(capsys, "experiment", "--preset", "fig1b")
    second = run(capsys, "experiment", "--preset", "fig1b")
    assert first == second and first[0] == 0


def test_module_entry_point():
    theta0 = repr(math.acos(math.sqrt(1 / 3)))
    res = subprocess.run([sys.executable, "-m", "spinsoliton", "coeffs", "--theta", theta0],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "Linear" in res.stdout
