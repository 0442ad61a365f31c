import json
import os
import subprocess
import sys
from importlib import resources

import pytest

from cwslab.cli import main
from cwslab.specfile import bundled_names

FIX = resources.files("cwslab") / "fixtures"

GOLDEN = [
    (["analyze", "ring3"], "ring3.analyze.report.json"),
    (["analyze", "ring5-K2"], "ring5_k2.analyze.report.json"),
    (["analyze", "ring5-K6"], "ring5_k6.analyze.report.json"),
    (["schedule", "ring5-K2", "--t", "1"], "ring5_k2.schedule.report.json"),
    (["schedule", "ring5-K2", "--mode", "additive"], "ring5_k2.additive.report.json"),
    (["schedule", "ring5-K6", "--t", "1", "--index-set", "2"], "ring5_k6.schedule.report.json"),
]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bundled_names_exclude_reports():
    assert bundled_names() == ["ring3", "ring5_k2", "ring5_k6"]


@pytest.mark.parametrize("argv,golden", GOLDEN, ids=[g for _, g in GOLDEN])
def test_golden_reports_byte_stable(capsys, monkeypatch, argv, golden):
    monkeypatch.delenv("CWSLAB_DENSE_BUDGET", raising=False)
    code, out, _ = run(capsys, *argv, "--quiet")
    assert code == 0
    assert out == (FIX / golden).read_text()
    code2, out2, _ = run(capsys, *argv, "--quiet")
    assert out2 == out


def test_analyze_values(capsys):
    code, out, err = run(capsys, "analyze", "ring5-K2")
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    assert rep["code"]["K"] == 2 and rep["code"]["distance"] == 3 and rep["code"]["additive"]
    assert rep["result"]["class_count"] == 16
    assert rep["result"]["counts"] == {"B": 16, "N": 6}
    assert "ring5" in err


def test_quiet_suppresses_summary(capsys):
    _, _, err = run(capsys, "analyze", "ring3", "--quiet")
    assert err == ""
    _, _, err = run(capsys, "analyze", "ring3")
    assert err.strip()


def test_recover_all_and_seeded(capsys):
    code, out, _ = run(capsys, "recover", "ring5-K2", "--t", "1", "--inject", "all", "--quiet")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["successes"] == 16
    assert rep["result"]["max_measurements"] <= 6
    a = run(capsys, "recover", "ring5-K2", "--trials", "12", "--seed", "5", "--quiet")[1]
    b = run(capsys, "recover", "ring5-K2", "--trials", "12", "--seed", "5", "--jobs", "3", "--quiet")[1]
    assert json.loads(a)["result"]["trials"] == json.loads(b)["result"]["trials"]


def test_recover_specific_injection(capsys):
    code, out, _ = run(capsys, "recover", "ring5-K6", "--t", "1", "--index-set", "2", "--inject", "Y2", "--quiet")
    rep = json.loads(out)
    assert code == 0
    assert rep["result"]["trials"][0]["identified_class"] == "11100"


def test_recover_uncorrectable_exits_1(capsys):
    code, out, _ = run(capsys, "recover", "ring5-K2", "--t", "1", "--inject", "XXIII", "--quiet")
    assert code == 1
    assert not json.loads(out)["ok"]


@pytest.mark.parametrize("name", ["ring3", "ring5-K2", "ring5-K6"])
def test_verify_fixtures(capsys, name):
    code, out, _ = run(capsys, "verify", name, "--quiet")
    rep = json.loads(out)
    failed = [r["name"] for r in rep["result"]["checks"] if not r["passed"]]
    assert code == 0, failed


def test_input_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "analyze", "no-such-code")[0] == 2
    assert run(capsys, "schedule", "ring5-K6", "--t", "1")[0] == 2
    assert run(capsys, "bogus")[0] == 2

    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "name": "x",\n  "n": 3,\n  "edges": [[1, 2],\n}')
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "line 5" in err

    doc = json.loads((FIX / "ring3.json").read_text())
    doc["codewords"] = ["00", "111"]
    bad.write_text(json.dumps(doc))
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "codewords[0]" in err

    doc = json.loads((FIX / "ring3.json").read_text())
    doc["edges"] = [[1, 4]]
    bad.write_text(json.dumps(doc))
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "edges" in err

    doc["edges"] = [[1, 2]]
    doc["colour"] = "red"
    bad.write_text(json.dumps(doc))
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "colour" in err


def test_dense_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("CWSLAB_DENSE_BUDGET", "4")
    code, out, err = run(capsys, "recover", "ring5-K2", "--inject", "XIIII")
    assert code == 1 and "budget" in err.lower()
    monkeypatch.setenv("CWSLAB_DENSE_BUDGET", "5")
    code, out, _ = run(capsys, "recover", "ring5-K2", "--inject", "XIIII", "--quiet")
    assert code == 0 and json.loads(out)["tolerances"]["dense_budget"] == 5


def test_entry_point_and_backend_flag():
    env = dict(os.environ, CWSLAB_NUMBA="0")
    res = subprocess.run([sys.executable, "-m", "cwslab", "--version"], capture_output=True, text=True, env=env)
    assert res.returncode == 0 and "numpy kernels" in res.stdout
