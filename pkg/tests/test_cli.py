import json
from fractions import Fraction
from pathlib import Path

import pytest

from apkit.cli import main
from apkit.config import from_dict, parse_eps
from apkit.errors import UsageError

CONFIGS = Path(__file__).resolve().parents[1] / "demos" / "configs"


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_eps_sorted_and_exact():
    assert parse_eps("0.25,1/2,0.25") == [Fraction(1, 2), Fraction(1, 4)]
    with pytest.raises(UsageError):
        parse_eps("0.5,-1")
    with pytest.raises(UsageError):
        parse_eps([])


def test_config_validation():
    with pytest.raises(UsageError):
        from_dict({"group": {}, "instance": {}})
    with pytest.raises(UsageError):
        from_dict({"group": {}, "instance": {}, "gauge": {}, "colour": 1})
    cfg = from_dict({"group": {"kind": "Z"}, "instance": {"kind": "trig"}, "gauge": {"name": "sup"},
                     "eps": [0.1, 0.5]})
    assert cfg.eps == [Fraction(1, 2), Fraction(1, 10)]


def test_analyze_trig(tmp_path, capsys):
    code, out, err = run(["analyze", "--config", str(CONFIGS / "trig_z.json"), "--out", str(tmp_path)], capsys)
    assert code == 0 and err == ""
    doc = json.loads((tmp_path / "classification.json").read_text())
    assert doc["schema"] == "apkit/1"
    assert doc["classification"]["bohr"] == "PASS"
    assert "WINDOWED" in doc["classification"]["flags"]
    assert (tmp_path / "periods.csv").read_text().startswith("eps,t,gauge_value\n")
    assert json.loads(out)["verdicts"]["bohr"] == "PASS"


def test_analyze_overrides(tmp_path, capsys):
    code, out, _ = run(["analyze", "--config", str(CONFIGS / "trig_z.json"), "--out", str(tmp_path),
                        "--eps", "0.3", "--window", "300"], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "classification.json").read_text())
    assert doc["config"]["eps"] == ["3/10"] and doc["config"]["window"] == "300"
    assert doc["reports"][0]["window"] == 300


def test_analyze_malformed_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, err = run(["analyze", "--config", str(bad)], capsys)
    assert code == 2
    diag = json.loads(err)
    assert diag["schema"] == "apkit/1" and diag["exitCode"] == 2


def test_analyze_schema_error(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"group": {"kind": "Z"}, "instance": {"kind": "trig"}, "gauge": {"name": "vague"}}))
    code, _, err = run(["analyze", "--config", str(cfg)], capsys)
    assert code == 2 and json.loads(err)["error"] == "UsageError"


def test_analyze_window_cap(tmp_path, capsys):
    code, _, err = run(["analyze", "--config", str(CONFIGS / "trig_z.json"), "--window", "100000000",
                        "--out", str(tmp_path)], capsys)
    assert code == 3 and json.loads(err)["error"] == "ResourceError"


def test_analyze_exact_needs_finite_group(tmp_path, capsys):
    code, _, _ = run(["analyze", "--config", str(CONFIGS / "trig_z.json"), "--exact"], capsys)
    assert code == 2
    code, _, _ = run(["analyze", "--config", str(CONFIGS / "z6_period2.json"), "--exact",
                      "--out", str(tmp_path)], capsys)
    assert code == 0


def test_analyze_deterministic(tmp_path, capsys):
    for d in ("a", "b"):
        assert run(["analyze", "--config", str(CONFIGS / "comb_measure.json"), "--out", str(tmp_path / d)],
                   capsys)[0] == 0
    for name in ("classification.json", "periods.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_net(tmp_path, capsys):
    code, out, _ = run(["net", "--config", str(CONFIGS / "z6_period2.json"), "--eps", "1",
                        "--out", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "nets.json").read_text())
    assert doc["nets"][0]["size"] == 2 and doc["nets"][0]["flags"] == []


@pytest.mark.parametrize("name,order", [("z6_period2", 2), ("z12_period6", 6)])
def test_hull(tmp_path, capsys, name, order):
    code, _, _ = run(["hull", "--config", str(CONFIGS / f"{name}.json"), "--out", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "hull.json").read_text())
    H = doc["hull"]
    assert H["order"] == order
    assert H["addTable"] == [[(i + j) % order for j in range(order)] for i in range(order)]
    assert all(doc["axioms"].values()) and all(H["certificate"].values())


def test_hull_trivial_group(tmp_path, capsys):
    cfg = tmp_path / "z1.json"
    cfg.write_text(json.dumps({"group": {"kind": "Zn", "n": 1}, "instance": {"kind": "function", "values": [2.0]},
                               "gauge": {"name": "sup"}}))
    assert run(["hull", "--config", str(cfg), "--out", str(tmp_path)], capsys)[0] == 0
    assert json.loads((tmp_path / "hull.json").read_text())["hull"]["addTable"] == [[0]]


def test_hull_rejects_infinite_group(capsys):
    code, _, err = run(["hull", "--config", str(CONFIGS / "trig_z.json")], capsys)
    assert code == 2 and "finite" in json.loads(err)["message"]


def test_counterexample(tmp_path, capsys):
    code, _, _ = run(["counterexample", "--n-max", "3", "--window", "700", "--out", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "counterexample.json").read_text())
    assert len(doc["intervals"]) == 9 and all(r["verdict"] == "PASS" for r in doc["intervals"])
    assert [g["norm"] >= g["N"] for g in doc["growth"]] == [True] * 3
    rows = (tmp_path / "counterexample_periods.csv").read_text().splitlines()
    assert rows[0] == "N,eps,t,gauge_value" and len(rows) > 1


def test_counterexample_empty(tmp_path, capsys):
    code, _, _ = run(["counterexample", "--n-max", "0", "--out", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "counterexample.json").read_text())
    assert doc["verdict"] == "PASS" and doc["intervals"] == [] and doc["growth"] == []


def test_counterexample_overflow(capsys):
    code, _, err = run(["counterexample", "--n-max", "21"], capsys)
    assert code == 3 and json.loads(err)["exitCode"] == 3


def test_oracle_suite(tmp_path, capsys):
    code, out, _ = run(["oracle-suite", "--seed", "3", "--count", "25", "--out", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "oracle_suite.json").read_text())
    assert doc["agree"] == 25 and doc["mismatches"] == []


def test_bad_command_line(capsys):
    code, _, err = run(["frobnicate"], capsys)
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["exitCode"] == 2


def test_module_entry_point(tmp_path):
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "apkit", "counterexample", "--n-max", "1", "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["verdict"] == "PASS"
