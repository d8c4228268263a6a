import csv
import json

import pytest

from linelab import fixtures
from linelab.cli import main
from linelab.report import write_json


@pytest.fixture(scope="module")
def specs(tmp_path_factory):
    d = tmp_path_factory.mktemp("specs")
    fixtures.write_all(str(d))
    return d


def test_version(capsys):
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.startswith("linelab ")


def test_no_command_and_bad_flags_are_input_errors():
    assert main([]) == 1
    assert main(["kopell"]) == 1
    assert main(["kopell", "--k", "3", "--alpha", "0.5"]) == 1
    assert main(["analyze"]) == 1


def test_kopell(capsys):
    assert main(["kopell", "--k", "3"]) == 0
    assert capsys.readouterr().out.strip() == "0.618033988750"
    assert main(["kopell", "--k", "4"]) == 0
    assert capsys.readouterr().out.strip() == "0.465571231877"
    assert main(["kopell", "--alpha", "0.6180339887498949"]) == 0
    assert capsys.readouterr().out.strip() == "3"
    assert main(["kopell", "--k", "2"]) == 1
    assert main(["kopell", "--alpha", "-1"]) == 1


@pytest.mark.parametrize(
    "name, code, case",
    [
        ("global_fixed_point", 0, "case1"),
        ("translations", 0, "subcase2a"),
        ("discrete_orbit", 0, "subcase2c"),
        ("crossed_pl", 2, "unclassified"),
        ("stage_family_k4", 2, "unclassified"),
    ],
)
def test_analyze_exit_codes(specs, tmp_path, name, code, case):
    out = tmp_path / "out"
    assert main(["analyze", str(specs / f"{name}.json"), "--out", str(out)]) == code
    rep = json.loads((out / "report.json").read_text())
    assert rep["classification"]["case"] == case
    assert (out / "crossings.csv").exists() and (out / "residuals.csv").exists()


def test_analyze_stage_family_reports_tower(specs, capsys):
    assert main(["analyze", str(specs / "stage_family_k4.json"), "--json"]) == 2
    doc = json.loads(capsys.readouterr().out)
    assert doc["tower"] is not None
    assert len(doc["tower"]["levels"]) == 3
    assert [float(v) for v in doc["tower"]["base"]] == [-1.0, 1.0]


def test_analyze_is_byte_deterministic(specs, tmp_path):
    for run in ("a", "b"):
        assert main(["analyze", str(specs / "translations.json"), "--out", str(tmp_path / run)]) == 0
    for f in ("report.json", "crossings.csv", "residuals.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_analyze_overrides(specs, capsys):
    assert main(["analyze", str(specs / "translations.json"), "--window", "-2", "2", "--budget-words", "2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["budget"]["word_len"] == 2
    assert main(["analyze", str(specs / "translations.json"), "--window", "2", "-2"]) == 1


def test_malformed_spec_reports_line_and_column(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "name": "x",\n  "window": [0 1]\n}')
    assert main(["analyze", str(p)]) == 1
    err = capsys.readouterr().err
    assert "line 3, column" in err


def test_invalid_spec_names_field(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"generators": [{"name": "a", "map": {"op": "nope"}}], "window": [0, 1]}))
    assert main(["analyze", str(p)]) == 1
    assert "generators[0].map" in capsys.readouterr().err


def test_missing_file_is_input_error(tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "none.json")]) == 1
    assert "none.json" in capsys.readouterr().err


def test_counterexample_build_and_verify(tmp_path):
    b = tmp_path / "b.json"
    assert main(["counterexample", "build", "--stages", "3", "--out", str(b)]) == 0
    rep, rows, sweep = tmp_path / "r.json", tmp_path / "r.csv", tmp_path / "s.csv"
    args = ["counterexample", "verify", str(b), "--report", str(rep), "--csv", str(rows), "--sweep", str(sweep), "--samples", "100", "--n-check", "5"]
    assert main(args) == 0
    assert json.loads(rep.read_text())["passed"] is True
    header = next(csv.reader(rows.open()))
    assert header == ["check", "location", "residual", "tolerance", "pass"]
    assert next(csv.reader(sweep.open())) == ["map", "x", "f", "df"]
    assert main(["counterexample", "build", "--stages", "1", "--out", str(b)]) == 1
    assert main(["counterexample", "verify", str(tmp_path / "r.csv")]) == 1


def test_counterexample_verify_tampered_build(tmp_path):
    b = tmp_path / "b.json"
    assert main(["counterexample", "build", "--stages", "3", "--out", str(b)]) == 0
    doc = json.loads(b.read_text())
    doc["maps"][1]["map"] = {"op": "expbump", "interval": ["-2", "2"]}
    write_json(str(b), doc)
    assert main(["counterexample", "verify", str(b), "--samples", "100", "--n-check", "5"]) == 2


def test_tower_find_and_verify(specs, tmp_path, capsys):
    t = tmp_path / "t.json"
    assert main(["tower", "find", str(specs / "stage_family_k4.json"), "--out", str(t)]) == 0
    assert main(["tower", "verify", str(t), "--pump-level", "1", "--iterates", "20"]) == 0
    out = capsys.readouterr().out
    assert "mu(I_2) >= 21" in out and "tower valid" in out
    assert main(["tower", "find", str(specs / "stage_family_k4.json"), "--nilpotent", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["validation"]["passed"]
    assert main(["tower", "find", str(specs / "translations.json")]) == 2
    assert main(["tower", "verify", str(t), "--pump-level", "9"]) == 2


def test_measure_estimate_and_verify(specs, tmp_path):
    m = tmp_path / "m.json"
    assert main(["measure", "estimate", str(specs / "translations.json"), "--out", str(m), "--csv", str(tmp_path / "m.csv")]) == 0
    assert main(["measure", "verify", str(specs / "translations.json"), str(m)]) == 0
    # a unit comb at 0 is not invariant under translation
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "dirac_comb", "points": [0.0], "weights": [1.0]}))
    assert main(["measure", "verify", str(specs / "translations.json"), str(bad)]) == 2
    assert main(["measure", "estimate", str(specs / "crossed_pl.json")]) == 2
    bad.write_text(json.dumps({"kind": "unknown"}))
    assert main(["measure", "verify", str(specs / "translations.json"), str(bad)]) == 1
