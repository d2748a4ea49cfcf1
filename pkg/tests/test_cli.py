import csv
import json
import math
from pathlib import Path

import pytest

from dyonlab import __version__
from dyonlab.cli import run
from dyonlab.config import CONFIG_SCHEMA

ROOT = Path(__file__).resolve().parents[1]


def report_of(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def result(rep, name):
    return next(r for r in rep["results"] if r["name"] == name)


def test_phase_vanishes_for_elementary_dyon(capsys):
    code, rep = report_of(capsys, ["phase", "--nq", "1", "--ng", "1", "--theta", "0", "--flux-quanta", "--n", "1"])
    assert code == 0
    assert abs(result(rep, "delta_D")["value"]["value"]) < 1e-12
    assert rep["version"] == __version__ and rep["seed"] == 42


def test_phase_flux_rule(capsys):
    code, rep = report_of(capsys, ["phase", "--nq", "2", "--ng", "1", "--n-phi-e", "1", "--n-phi-m", "3",
                                   "--theta", "1.234", "--n", "2"])
    assert code == 0
    assert result(rep, "flux_rule_N")["value"] == 10
    assert result(rep, "flux_rule_phase")["passed"]


def test_scatter_backscatter_value(capsys):
    code, rep = report_of(capsys, ["scatter", "--theta", "3.14159265", "--k", "1", "--phi", "3.14159265"])
    assert code == 0
    closed = next(r for r in rep["results"] if r["name"].startswith("closed_form"))
    assert abs(closed["value"] - 0.1591549) < 1e-6
    assert all(r["provenance"] in ("analytic", "oracle") for r in rep["results"])


def test_scatter_forward_direction_is_error(capsys):
    assert run(["scatter", "--phi", "0"]) == 2


def test_charges_pairing(capsys):
    code, rep = report_of(capsys, ["charges", "--nq", "1", "--ng", "1", "--theta", "0.7",
                                   "--partner-nq", "0", "--partner-ng", "1"])
    assert code == 0
    assert result(rep, "sz_N")["value"] == 1
    assert result(rep, "sz_pairing")["value"] == pytest.approx(0.5)


def test_flux_command(capsys):
    code, rep = report_of(capsys, ["flux", "--n-phi-e", "1", "--n-phi-m", "1", "--theta", str(math.pi)])
    assert code == 0
    f = result(rep, "flux")["value"]
    q = result(rep, "quanta")["value"]
    assert f["phi_e"] == pytest.approx(1.5 * q["phi_e0"])


def test_loop_integral_from_csv(tmp_path, capsys):
    path = tmp_path / "square.csv"
    rows = [(2, -2), (2, 2), (-2, 2), (-2, -2), (2, -2)]
    # dense sampling so the azimuth can be tracked
    pts = []
    for (x0, y0), (x1, y1) in zip(rows[:-1], rows[1:]):
        pts += [(x0 + (x1 - x0) * t / 16, y0 + (y1 - y0) * t / 16) for t in range(16)]
    pts.append(rows[-1])
    path.write_text("x,y\n" + "\n".join(f"{x},{y}" for x, y in pts) + "\n")
    code, rep = report_of(capsys, ["loop-integral", "--path", str(path), "--theta", "0.9"])
    assert code == 0
    assert result(rep, "winding_number")["value"] == 1
    assert result(rep, "loop_integral")["value"] == pytest.approx(0.9, abs=1e-8)


def test_loop_integral_dyon_field(capsys):
    code, rep = report_of(capsys, ["loop-integral", "--field", "dyon", "--nq", "1", "--ng", "1", "--theta", "2.0",
                                   "--flux-quanta", "--radius-eps", "0.1", "--radius", "1.5", "--turns", "-2"])
    assert code == 0
    assert result(rep, "loop_integral")["value"] == pytest.approx(-4.0, abs=1e-8)


def test_vacuum_csv_and_records(tmp_path, capsys):
    out = tmp_path / "vac.csv"
    code, rep = report_of(capsys, ["vacuum", "--theta", "1", "--M", "100", "--csv", str(out)])
    assert code == 0
    assert result(rep, "eigenvalue_residual")["passed"]
    assert len(rep["data"]["state"]) == 201
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "re", "im"] and len(rows) == 202


def test_fringe_csv(tmp_path, capsys):
    out = tmp_path / "fringe.csv"
    code, rep = report_of(capsys, ["fringe", "--theta", str(math.pi), "--csv", str(out)])
    assert code == 0
    assert result(rep, "delta_x")["value"] == pytest.approx(50, abs=1)
    assert out.read_text().splitlines()[0] == "x,intensity"


def test_evolve_small(tmp_path, capsys):
    out = tmp_path / "field.csv"
    code, rep = report_of(capsys, ["evolve", "--grid", "32", "--steps", "20", "--alpha-eff", "0.3",
                                   "--width", "3", "--csv", str(out)])
    assert code == 0
    assert result(rep, "norm_drift_per_step")["passed"]
    lines = out.read_text().splitlines()
    assert lines[0] == "x,y,re,im" and len(lines) == 32 * 32 + 1


def test_check_suite_seeded(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["check", "--suite", "all", "--seed", "42", "--skip-two-path"]
    assert run(argv + ["--report", str(a)]) == 0
    assert run(argv + ["--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["passed"] and len(rep["results"]) >= 20
    assert all("tolerance" in r and "provenance" in r for r in rep["results"])


def test_check_failure_exit_code(monkeypatch, tmp_path):
    from dyonlab import checks
    from dyonlab.checks import CheckResult
    monkeypatch.setitem(checks.SUITES, "vacua", lambda rng: [CheckResult("vacua.broken", False, 1.0, 0.0, "analytic")])
    out = tmp_path / "r.json"
    assert run(["check", "--suite", "vacua", "--report", str(out)]) == 1
    assert json.loads(out.read_text())["results"][0]["passed"] is False


def test_timing_only_when_asked(capsys):
    _, rep = report_of(capsys, ["flux"])
    assert "wall_time" not in rep
    _, rep = report_of(capsys, ["flux", "--timing"])
    assert rep["wall_time"] >= 0


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"version": 1, "command": "vacuum", "seed": 7,
                               "params": {"theta": 0.5, "M": 4}}))
    code, rep = report_of(capsys, ["vacuum", "--config", str(cfg), "--M", "6"])
    assert code == 0
    assert rep["inputs"] == {"M": 6, "theta": 0.5} and rep["seed"] == 7


def test_config_output_paths(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    report, data = tmp_path / "out.json", tmp_path / "out.csv"
    cfg.write_text(json.dumps({"version": 1, "params": {"M": 3},
                               "output": {"report": str(report), "csv": str(data)}}))
    assert run(["vacuum", "--config", str(cfg)]) == 0
    assert "PASS" in capsys.readouterr().out
    assert json.loads(report.read_text())["command"] == "vacuum"
    assert data.read_text().startswith("n,re,im\n")


@pytest.mark.parametrize("text, fragment", [
    ('{"version": 1, "params": {"M": 3,}}', ":1:"),
    ('{"version": 2}', "version"),
    ('{"version": 1, "params": {"M": 0}}', "params/M"),
    ('{"version": 1, "params": {"bogus": 1}}', "bogus"),
    ('{"version": 1, "extra": true}', "extra"),
    ('{"version": 1, "command": "scatter"}', "scatter"),
])
def test_malformed_config_exit_2(tmp_path, capsys, text, fragment):
    cfg = tmp_path / "bad.json"
    cfg.write_text(text)
    assert run(["vacuum", "--config", str(cfg)]) == 2
    assert fragment in capsys.readouterr().err


def test_missing_config_file(capsys):
    assert run(["vacuum", "--config", "/nonexistent/cfg.json"]) == 2


def test_usage_errors():
    assert run([]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["vacuum", "--M", "many"]) == 2


def test_unwritable_report():
    assert run(["flux", "--report", "/nonexistent/dir/report.json"]) == 2


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("DYONLAB_THREADS", "-3")
    assert run(["flux"]) == 2


def test_shipped_schema_matches_code():
    shipped = json.loads((ROOT / "docs" / "config_schema.json").read_text())
    assert shipped == json.loads(json.dumps(CONFIG_SCHEMA))
