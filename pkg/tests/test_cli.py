import csv
import io
import json
import math
import subprocess
import sys

import pytest

from gentile_lab import cli
from gentile_lab.equivalence import MAX_DP_ENV, validate_equivalence
from gentile_lab.thermo import canonical_energy


def invoke(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestExamples:
    def test_count_p100(self, capsys):
        code, out, _ = invoke(capsys, "count", "--n", "100")
        assert code == 0
        (row,) = csv_rows(out)
        assert row["exact"] == "190569292"
        assert float(row["log"]) == pytest.approx(math.log(190569292), rel=1e-11)

    def test_count_json_exact_is_string(self, capsys):
        code, out, _ = invoke(capsys, "count", "--n", "500", "--format", "json")
        doc = json.loads(out)
        assert code == 0
        assert isinstance(doc["rows"][0]["exact"], str)
        assert int(doc["rows"][0]["exact"]) > 2**64
        assert doc["metadata"]["subcommand"] == "count"
        assert doc["metadata"]["parameters"]["n"] == "500"

    def test_equiv_row_matches_library(self, capsys):
        code, out, _ = invoke(capsys, "equiv", "--n", "400", "--cap-n", "20", "--s", "1", "--route", "exact")
        assert code == 0
        (row,) = csv_rows(out)
        rep = validate_equivalence(400, 20)
        assert float(row["relative_residual"]) == pytest.approx(rep.relative_residual, rel=1e-11)
        assert int(row["m_used"]) == rep.m_used
        assert row["m_clamped"] == "false"

    def test_asympt_domain_error(self, capsys):
        code, out, err = invoke(capsys, "asympt", "--formula", "hr", "--n", "0")
        assert code == 1 and out == ""
        assert err.startswith("domain error:")

    def test_thermo_canonical_range(self, capsys):
        code, out, _ = invoke(capsys, "thermo", "--mode", "canonical", "--N", "10:50:10", "--T", "10")
        rows = csv_rows(out)
        assert code == 0 and len(rows) == 5
        for N, row in zip(range(10, 51, 10), rows):
            assert float(row["energy"]) == pytest.approx(canonical_energy(N, 10.0), rel=1e-11)

    def test_equiv_auto_list(self, capsys):
        code, out, _ = invoke(capsys, "equiv", "--n", "400,900", "--cap-n", "auto", "--no-best-m")
        rows = csv_rows(out)
        assert code == 0
        assert [(r["n"], r["N"]) for r in rows] == [("400", "40"), ("900", "60")]

    def test_empty_range(self, capsys):
        code, _, err = invoke(capsys, "count", "--n", "5:1:1")
        assert code == 1 and err.startswith("input error:")


class TestSweeps:
    def test_lexicographic_order(self, capsys):
        _, out, _ = invoke(capsys, "count", "--n", "3,4", "--max-parts", "1:2:1")
        assert [(r["n"], r["max_parts"]) for r in csv_rows(out)] == [("3", "1"), ("3", "2"), ("4", "1"), ("4", "2")]

    def test_mixed_list_and_range(self):
        assert cli.parse_values("1,5:9:2", "int") == [1, 5, 7, 9]
        assert cli.parse_values("0.1:0.3:0.1", "float") == [0.1, 0.2, 0.3]
        assert cli.parse_values("inf,3", "float|inf") == [math.inf, 3.0]

    def test_row_cap(self, capsys):
        code, _, err = invoke(capsys, "count", "--n", "1:400:1", "--max-parts", "1:400:1")
        assert code == 1 and "cap" in err

    def test_output_file(self, tmp_path, capsys):
        path = tmp_path / "out.json"
        code, out, _ = invoke(capsys, "count", "--n", "7", "--format", "json", "--output", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["rows"][0]["exact"] == "15"

    def test_jobs_do_not_change_output(self, capsys):
        argv = ["thermo", "--mode", "grand", "--N", "10:40:10", "--T", "2,5", "--M", "2,inf"]
        _, serial, _ = invoke(capsys, *argv)
        _, parallel, _ = invoke(capsys, *argv, "--jobs", "2")
        assert serial == parallel

    def test_literal_note(self, capsys):
        _, out, _ = invoke(capsys, "asympt", "--formula", "frac", "--n", "900", "--M", "1",
                           "--paper-literal-eq5", "--format", "json")
        doc = json.loads(out)
        assert doc["rows"][0]["log_value"] == "-inf"
        assert doc["notes"]

    def test_clamp_note(self, capsys):
        _, out, _ = invoke(capsys, "equiv", "--n", "100", "--cap-n", "90", "--m-cap", "1000", "--format", "json")
        doc = json.loads(out)
        assert doc["rows"][0]["m_clamped"] is True
        assert doc["rows"][0]["m_used"] is None
        assert any("cap" in note for note in doc["notes"])


class TestEncodings:
    @pytest.mark.parametrize(
        "argv",
        [
            ["count", "--n", "0:60:12", "--max-mult", "none,2"],
            ["asympt", "--formula", "micro", "--n", "100,1000", "--s", "0.5,2"],
            ["thermo", "--mode", "delta-gentile", "--N", "50", "--T", "10", "--M", "20,40"],
            ["equiv", "--n", "100,400", "--route", "asymptotic"],
        ],
    )
    def test_csv_and_json_carry_same_values(self, capsys, argv):
        _, text_csv, _ = invoke(capsys, *argv)
        _, text_json, _ = invoke(capsys, *argv, "--format", "json")
        rows_csv = csv_rows(text_csv)
        rows_json = json.loads(text_json)["rows"]
        assert len(rows_csv) == len(rows_json)
        for a, b in zip(rows_csv, rows_json):
            assert list(a) == list(b)
            for key, value in b.items():
                if value is None:
                    assert a[key] == ""
                elif isinstance(value, bool):
                    assert a[key] == str(value).lower()
                elif isinstance(value, str):
                    assert a[key] == value
                else:
                    assert float(a[key]) == value


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv, code, prefix",
        [
            (["count", "--n", "10"], 0, None),
            (["validate", "--n", "100", "--cap-n", "100"], 0, None),
            (["validate", "--n", "400", "--cap-n", "20"], 2, "validation failed:"),
            (["count"], 1, "input error:"),
            (["count", "--n", "10", "--bogus", "1"], 1, "input error:"),
            (["frobnicate"], 1, "input error:"),
            (["count", "--n", "ten"], 1, "input error:"),
            (["count", "--n", "-3"], 1, "domain error:"),
            (["thermo", "--mode", "grand", "--N", "10", "--T", "0"], 1, "domain error:"),
            (["asympt", "--formula", "micro", "--n", "10", "--s", "50"], 1, "domain error:"),
            (["thermo", "--mode", "canonical", "--N", "10", "--T", "1", "--s", "2"], 1, "input error:"),
            (["count", "--n", "1", "--jobs", "0"], 1, "input error:"),
        ],
    )
    def test_matrix(self, capsys, argv, code, prefix):
        got, _, err = invoke(capsys, *argv)
        assert got == code
        if prefix:
            assert err.startswith(prefix)

    def test_infeasible_via_env(self, capsys, monkeypatch):
        monkeypatch.setenv(MAX_DP_ENV, "100")
        code, _, err = invoke(capsys, "equiv", "--n", "400", "--cap-n", "20")
        assert code == 1 and err.startswith("infeasible:")

    def test_version(self, capsys):
        code, out, _ = invoke(capsys, "--version")
        assert code == 0 and "gentile-lab" in out


def test_subprocess_byte_identical(tmp_path):
    argv = [sys.executable, "-m", "gentile_lab", "equiv", "--n", "100,200", "--format", "json"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first.endswith(b"\n")
