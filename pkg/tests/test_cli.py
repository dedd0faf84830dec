"""Command line interface: exit codes, report schema, determinism."""

import json
import subprocess
import sys

BASE = [sys.executable, "-m", "dflab.cli"]


def run_cli(*args, **kw):
    return subprocess.run(BASE + list(args), capture_output=True, text=True, **kw)


def test_check_cauchy_report(tmp_path):
    out = tmp_path / "r.json"
    p = run_cli("check", "cauchy", "--out", str(out))
    assert p.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1
    assert doc["ring"] == {"field": "F_97", "vars": ["x", "y"], "seq": ["x", "y"]}
    assert doc["pass"] is True
    (s,) = doc["scenarios"]
    assert set(s) >= {"name", "expected", "computed", "per_degree", "pass", "millis"}
    assert s["name"] == "check-cauchy"


def test_reports_are_byte_identical_modulo_timing(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli("check", "schur", "--no-timing", "--out", str(a)).returncode == 0
    assert run_cli("check", "schur", "--no-timing", "--out", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_error_exit_code():
    p = run_cli("gk", "--seq", "x,0")
    assert p.returncode == 2
    assert "configuration error" in p.stderr
    p2 = run_cli("gk", "--seq", "x")  # needs length 2
    assert p2.returncode == 2
    p3 = run_cli("gk", "--prime", "91")
    assert p3.returncode == 2


def test_budget_exit_code(tmp_path):
    out = tmp_path / "r.json"
    p = run_cli("gk", "--budget-seconds", "0", "--out", str(out))
    assert p.returncode == 3
    doc = json.loads(out.read_text())
    assert doc["scenarios"][0]["partial"] is True


def test_predict_d3_markdown():
    p = run_cli("predict", "--d", "3", "--format", "markdown")
    assert p.returncode == 0
    assert "| predict | yes |" in p.stdout
    assert "overall: pass" in p.stdout


def test_mismatch_exit_code(tmp_path):
    # an over-truncated window cannot reproduce the expected table
    p = run_cli("cross3", "--nmax", "3", "--tmax", "4", "--out", str(tmp_path / "r.json"))
    assert p.returncode == 1


def test_gk_json_to_stdout():
    p = run_cli("gk", "--tmax", "8")
    assert p.returncode == 0
    doc = json.loads(p.stdout)
    assert doc["scenarios"][0]["computed"]["ranks"] == [1, 0, 1, 0, 1, 0, 0]
    assert "[PASS] gk" in p.stderr


def test_config_file_with_flag_override(tmp_path):
    import json as _json

    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(_json.dumps({"d": 3, "format": "markdown"}))
    p = run_cli("predict", "--config", str(cfgfile))
    assert p.returncode == 0
    assert "| predict | yes |" in p.stdout  # markdown from the config file
    assert '"cr3": [1, 6, 15, 18, 9]' in p.stdout or "[1, 6, 15, 18, 9]" in p.stdout
    # explicit flag beats the config value
    p2 = run_cli("predict", "--config", str(cfgfile), "--d", "1", "--format", "json")
    assert p2.returncode == 0
    doc = json.loads(p2.stdout)
    assert doc["scenarios"][0]["computed"]["d"] == 1
