import csv
import json
import subprocess
import sys

import pytest

from carlitz_prolong.cli_report import load_config, main, record, summarize
from carlitz_prolong.errors import ConfigError


def _run(tmp_path, *args):
    return main(list(args))


def test_default_suite_passes(tmp_path):
    out, table = tmp_path / "r.json", tmp_path / "r.csv"
    assert main(["suite", "--out", str(out), "--csv", str(table)]) == 0
    rep = json.loads(out.read_text())
    assert rep["exit_code"] == 0
    assert {r["status"] for r in rep["results"]} == {"pass"}
    rows = list(csv.DictReader(table.open()))
    assert len(rows) == len(rep["results"])
    assert rows[0].keys() == {"name", "status", "residual_valuation", "precision"}


def test_low_precision_is_exhausted_not_failed(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"N": 8, "n_list": [1, 2], "k_list": [0, 1]}))
    out = tmp_path / "r.json"
    assert main(["suite", "--config", str(cfg), "--out", str(out)]) == 2
    statuses = [r["status"] for r in json.loads(out.read_text())["results"]]
    assert "fail" not in statuses and "exhausted" in statuses


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("CARLITZ_PRECISION_OVERRIDE", "8")
    assert load_config(None)["N"] == 8
    monkeypatch.setenv("CARLITZ_PRECISION_OVERRIDE", "lots")
    assert main(["suite", "--out", str(tmp_path / "r.json")]) == 3


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"q": 6}', '{"n_list": []}',
                                     '{"k_list": [-1]}', '{"N": 0}'])
def test_bad_configs(tmp_path, content):
    p = tmp_path / "c.json"
    p.write_text(content)
    assert main(["suite", "--config", str(p), "--out", str(tmp_path / "o.json")]) == 3


def test_missing_config(tmp_path):
    assert main(["suite", "--config", str(tmp_path / "nope.json")]) == 3
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "nope.json"))


def test_fixtures_are_deterministic(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n_list": [1, 2], "k_list": [0, 1]}))
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        main(["suite", "--config", str(cfg), "--out", str(d / "r.json"), "--emit-fixtures", str(d)])
    names = sorted(p.name for p in a.iterdir())
    assert "Omega.json" in names and "periods_n2.json" in names
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()
    pv = json.loads((a / "periods_n1.json").read_text())
    assert pv["normalized"] and pv["n"] == 1


def test_record_classification():
    assert record("x", {"pass": True, "precision": "infinity"}, 64)["status"] == "pass"
    assert record("x", {"pass": False, "precision": 100}, 64)["status"] == "fail"
    assert record("x", {"pass": True, "precision": 10}, 64)["status"] == "exhausted"
    assert summarize([{"status": "pass"}, {"status": "exhausted"}]) == 2
    assert summarize([{"status": "fail"}, {"status": "exhausted"}]) == 1


def test_subcommands(tmp_path):
    for args in (["specialfn", "--q", "3"], ["periods", "--n", "2"],
                 ["torsion", "--q", "2", "--d", "2", "--nmax", "2", "--csv", str(tmp_path / "t.csv")],
                 ["prolong", "--type", "tmodule", "--k", "2"], ["prolong", "--type", "dual", "--n", "2"],
                 ["verify", "--n", "2", "--k", "2"]):
        out = tmp_path / "o.json"
        assert main(args + ["--json", str(out)]) == 0, args
        assert json.loads(out.read_text())


def test_periods_json_shape(tmp_path):
    out = tmp_path / "p.json"
    main(["periods", "--q", "3", "--n", "3", "--json", str(out)])
    rep = json.loads(out.read_text())
    assert len(json.dumps(rep)) > 0
    text = out.read_text()
    assert "route_agreement" in text


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "carlitz_prolong", "prolong", "--k", "1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and json.loads(r.stdout)
