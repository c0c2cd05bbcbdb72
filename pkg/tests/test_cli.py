import csv
import json
import subprocess
import sys

import pytest

from desalsched import cli, data_path
from desalsched.oracle import CertificationReport

CONFIG = str(data_path("reference_plant.json"))
PROFILE = str(data_path("solar_fixture.csv"))
STATS = str(data_path("solar_fixture_stats.json"))


def _json(capsys, argv):
    assert cli.main(argv) == 0
    return json.loads(capsys.readouterr().out)


def _csv_body(path):
    with open(path) as fp:
        lines = fp.read().splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    rows = list(csv.DictReader(ln for ln in lines if not ln.startswith("#")))
    return comments, rows


def test_thresholds(capsys):
    doc = _json(capsys, ["thresholds", "--config", CONFIG])
    assert doc["regime"] == "INTERIOR"
    assert doc["gamma_ex"] == pytest.approx(33232.0, rel=1e-12)
    assert doc["w_h_nz"] == pytest.approx(23.75, rel=1e-12)
    assert doc["manifest"]["subcommand"] == "thresholds"


def test_thresholds_price_override(capsys):
    doc = _json(capsys, ["thresholds", "--config", CONFIG, "--pi-water", "5"])
    assert doc["regime"] == "HIGH"
    assert doc["manifest"]["tariff_overrides"] == {"pi_water": 5.0}


def test_dispatch(capsys):
    doc = _json(capsys, ["dispatch", "--config", CONFIG, "--g", "0"])
    assert doc["w_h"] == pytest.approx(23.75, rel=1e-12)
    assert doc["w_r"] == pytest.approx(59.375, rel=1e-12)
    assert abs(doc["z"]) <= 1e-9
    assert doc["zone"] == "NZ_INTERIOR" and doc["profit"] == pytest.approx(56.40625, rel=1e-12)


def test_simulate_to_directory(tmp_path, capsys):
    assert cli.main(["simulate", "--config", CONFIG, "--profile", PROFILE, "--out", str(tmp_path)]) == 0
    comments, rows = _csv_body(tmp_path / "schedule.csv")
    assert any("subcommand: simulate" in c for c in comments)
    assert len(rows) == 24 and rows[0]["zone"] == "NZ_INTERIOR"


def test_simulate_to_stdout(capsys):
    assert cli.main(["simulate", "--config", CONFIG, "--profile", PROFILE, "--day", "364"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# tool: desalsched")
    assert "hour,g,w_h,w_r,q_h,q_r,z,profit,zone" in out


def test_montecarlo_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        argv = ["montecarlo", "--config", CONFIG, "--stats", STATS, "--runs", "300", "--seed", "4", "--out", str(p)]
        assert cli.main(argv) == 0
    a, b = (p.read_bytes() for p in paths)
    # only the output path in the manifest differs
    assert a.replace(b"a.json", b"b.json") == b
    doc = json.loads(a)
    assert doc["runs"] == 300 and doc["manifest"]["seed"] == 4


def test_sweep_regimes(tmp_path, capsys):
    doc = _json(capsys, ["sweep", "--config", CONFIG, "--prices", "0.2,1.5,5", "--profile", PROFILE, "--out", str(tmp_path)])
    assert [r["regime"] for r in doc["results"]] == ["LOW", "INTERIOR", "HIGH"]
    files = sorted(tmp_path.glob("sweep_pw_*.csv"))
    assert len(files) == 3
    comments, rows = _csv_body(tmp_path / "sweep_pw_5.0.csv")
    assert "# regime: HIGH" in comments
    assert all(float(r["w_r"]) == 8333.0 for r in rows)


def test_certify_passes(capsys):
    doc = _json(capsys, ["certify", "--config", CONFIG, "--prices", "0.2,1.5,5", "--n-steps", "300"])
    assert doc["passed"] and len(doc["reports"]) == 3
    assert len(doc["reports"][0]["samples"]) == 101


def test_certify_failure_exit_code(monkeypatch, capsys):
    def failing(*args, **kwargs):
        return CertificationReport(False, 0.01, (), 1.0, 0.0, "FAIL: forced")

    monkeypatch.setattr(cli, "certify_policy", failing)
    assert cli.main(["certify", "--config", CONFIG]) == 3
    assert json.loads(capsys.readouterr().out)["passed"] is False


def test_sample(tmp_path, capsys):
    out = tmp_path / "days.csv"
    assert cli.main(["sample", "--stats", STATS, "--runs", "5", "--seed", "1", "--out", str(out)]) == 0
    comments, rows = _csv_body(out)
    assert len(rows) == 5 and "seed: 1" in "\n".join(comments)
    assert all(float(r["h0"]) == 0.0 for r in rows)


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["dispatch", "--config", CONFIG],
    ["dispatch", "--config", CONFIG, "--g", "-5"],
    ["sweep", "--config", CONFIG, "--prices", "a,b", "--profile", PROFILE, "--out", "x"],
    ["simulate", "--config", CONFIG, "--profile", PROFILE, "--day", "999"],
    ["montecarlo", "--config", CONFIG, "--stats", STATS, "--runs", "0"],
])
def test_usage_errors(argv, capsys):
    assert cli.main(argv) == 1
    assert capsys.readouterr().err


def test_invalid_config_exit_code(tmp_path, capsys):
    with open(CONFIG) as fp:
        doc = json.load(fp)
    doc["tariff"]["pi_buy"] = 0.01
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert cli.main(["thresholds", "--config", str(bad)]) == 2
    assert "pi_buy < pi_sell" in capsys.readouterr().err
    assert cli.main(["thresholds", "--config", str(tmp_path / "missing.json")]) == 2


def test_bad_profile_exit_code(tmp_path, capsys):
    bad = tmp_path / "p.csv"
    bad.write_text("day," + ",".join(f"h{h}" for h in range(24)) + "\nd," + ",".join(["-1"] * 24) + "\n")
    assert cli.main(["simulate", "--config", CONFIG, "--profile", str(bad)]) == 2
    assert "line 2, column h0" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "desalsched", "dispatch", "--config", CONFIG, "--g", "40000"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["zone"] == "EXPORT"
