import datetime as dt
import json

import pytest

from pension_toolkit import cli
from pension_toolkit.core_types import Sex, validate_records
from pension_toolkit.errors import SchemaError
from pension_toolkit.io import (
    BENEFICIARY_COLUMNS,
    bundled_path,
    money,
    num,
    read_beneficiaries,
    read_csv,
    read_economics,
    write_beneficiaries,
    write_csv,
    write_json,
)

from conftest import elderly

BENEF = bundled_path("beneficiaries_sample.csv")
ECON = bundled_path("economics_sample.csv")


def test_money_rounding():
    assert money(0.125) == "0.13"
    assert money(2.675) == "2.68"  # repr is 2.675, so half-up applies
    assert money(-1.005) == "-1.01"
    assert money(714044109.82 * 4.35) == "3106091877.72"


def test_num_format():
    assert num(None) == "" and num(True) == "1" and num(3) == "3"
    assert num(float("inf")) == "inf" and num(float("nan")) == "nan"
    assert num(1 / 3) == "0.3333333333"


def test_beneficiary_round_trip(tmp_path):
    recs = [elderly(k, 1 + k % 27, Sex(1 + k % 2), 65 + k % 20, survivor=k % 5 == 0) for k in range(40)]
    path = tmp_path / "b.csv"
    write_beneficiaries(path, recs)
    assert read_beneficiaries(path) == recs


def test_schema_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    write_csv(bad, BENEFICIARY_COLUMNS, [("a", 30, "M", "1950-01-01", "2018-02-01", "E", 0),
                                         ("b", 3, "X", "1950-01-01", "2018-02-01", "E", 0),
                                         ("c", 3, "M", "1950-13-01", "2018-02-01", "E", 0)])
    with pytest.raises(SchemaError) as exc:
        read_beneficiaries(bad)
    assert len(exc.value.diagnostics) == 3
    assert exc.value.diagnostics[0].startswith("row 2:")
    missing = tmp_path / "missing.csv"
    write_csv(missing, ("id", "uf_num"), [])
    with pytest.raises(SchemaError):
        read_beneficiaries(missing)


def test_bundled_fixtures_parse():
    recs = read_beneficiaries(BENEF)
    report = validate_records(recs)
    assert len(recs) == 800
    assert {r.id for r in report.rejected} == {"B00000", "B00001"}
    econ = read_economics(ECON)
    assert sorted(r.uf for r in econ) == list(range(1, 28))


def test_json_writer_nulls_nonfinite(tmp_path):
    p = write_json(tmp_path / "x.json", {"b": float("inf"), "a": [1.5, float("nan")], "d": dt.date(2018, 4, 6)})
    assert json.loads(p.read_text()) == {"a": [1.5, None], "b": None, "d": "2018-04-06"}


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_validate_counts_survivors(tmp_path):
    recs = [elderly(f"s{k:03d}", 1 + k % 27, Sex(1 + k % 2), 66, survivor=k < 7) for k in range(100)]
    inp = tmp_path / "b.csv"
    write_beneficiaries(inp, recs)
    assert run("validate", "--input", inp, "--out", tmp_path / "o") == 0
    doc = json.loads((tmp_path / "o" / "validation.json").read_text())
    assert doc["counts"]["analysis"] == 93
    assert doc["counts"]["excluded_survivor"] == 7
    manifest = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert manifest["row_counts"]["accepted"] == 100
    assert len(manifest["inputs"]["beneficiaries"]["sha256"]) == 64


def test_exit_codes(tmp_path, capsys):
    assert run("edb", "--input", tmp_path / "nope.csv", "--out", tmp_path) == 2
    assert run("edb") == 1
    assert run("bogus") == 1
    assert run("edb", "--input", BENEF, "--rate", "-2", "--out", tmp_path) == 1
    assert run("cluster", "--k", "40", "--out", tmp_path) == 1
    assert run("regress", "--input", ECON, "--regressors", "gdp", "--out", tmp_path) == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("id,uf_num\n1,2\n")
    assert run("validate", "--input", bad, "--out", tmp_path) == 2
    err = capsys.readouterr().err
    assert "missing columns" in err


def test_seed_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "5")
    assert run("cluster", "--method", "kmeans", "--out", tmp_path / "a") == 0
    assert json.loads((tmp_path / "a" / "manifest.json").read_text())["seed"] == 5
    assert run("cluster", "--method", "kmeans", "--seed", "9", "--out", tmp_path / "b") == 0
    assert json.loads((tmp_path / "b" / "manifest.json").read_text())["seed"] == 9
    monkeypatch.setenv(cli.SEED_ENV, "abc")
    assert run("cluster", "--out", tmp_path / "c") == 1


def test_edb_csv_contents(tmp_path):
    assert run("edb", "--input", BENEF, "--le-basis", "both", "--format", "csv", "--out", tmp_path) == 0
    rows = read_csv(tmp_path / "edb_report.csv")
    assert not (tmp_path / "edb_report.json").exists()
    assert {r["basis"] for r in rows} == {"after65", "birth"}
    nation = [r for r in rows if r["group_kind"] == "nation"]
    expected = len(validate_records(read_beneficiaries(BENEF)).elderly())
    assert len(nation) == 2 and all(int(r["count"]) == expected for r in nation)


def test_aaf_cli_warns_and_reports(tmp_path, capsys):
    assert run("aaf", "--input", BENEF, "--out", tmp_path) == 0
    rows = read_csv(tmp_path / "aaf_report.csv")
    assert {r["proposal"] for r in rows} == {"1", "2"}
    for r in rows:
        w = int(r["w_months"])
        assert float(r["factor"]) == pytest.approx((780 + w) / 780)
        assert float(r["new_age_years"]) == pytest.approx((780 + w) / 12, abs=0.005)


def test_reform_cli(tmp_path):
    assert run("reform", "--out", tmp_path) == 0
    gaps = {r["uf_num"]: r["gap_years"] for r in read_csv(tmp_path / "reform.csv")}
    assert gaps["1"] == "-3.12" and gaps["19"] == "4.33"


def test_regress_cli_outputs(tmp_path):
    assert run("regress", "--input", ECON, "--emit-plot-data", "--out", tmp_path) == 0
    models = read_csv(tmp_path / "regress_models.csv")
    assert len(models) == 12
    for name in ("coefficients", "influence", "turning_points", "vif"):
        assert (tmp_path / f"regress_{name}.csv").exists()
    assert (tmp_path / "plot_qq.csv").exists()
