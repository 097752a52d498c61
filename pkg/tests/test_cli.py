import dataclasses
import io
import json
import subprocess
import sys

import pytest

import crepant.cli as cli
from crepant.cli import ScanRecord, main, scan_types
from crepant.criteria import Verdict
from crepant.polynomial import RemainderPolynomial


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_analyze_crepant():
    code, text = run("analyze", "15:1,2,6,6", "--poly")
    assert code == 0
    assert "verdict: Crepant" in text
    assert "remainder polynomial (10 terms):" in text
    assert "HJ expansion of 15/2: [8, 2] (congruent to 2 mod 2)" in text
    assert "cross-check: agree" in text


def test_analyze_not_crepant():
    code, text = run("analyze", "9:1,2,3,3")
    assert code == 0
    assert "verdict: NotCrepant" in text
    assert "witness: x2 -> (1,1,1,1)/2 age=2" in text
    assert "[5, 2] (not congruent to 2 mod 2)" in text


def test_analyze_non_gorenstein_is_indeterminate():
    code, text = run("analyze", "15:1,2,6")
    assert code == 0 and "verdict: Indeterminate" in text and "not Gorenstein" in text


@pytest.mark.parametrize("bad", ["15:1,2,x", "8:1,2,5,8", "abc"])
def test_analyze_parse_errors(bad, capsys):
    code, _ = run("analyze", bad)
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")


def test_analyze_rotation_reported():
    code, text = run("analyze", "15:2,6,1,6")
    assert code == 0 and "normalized: 15:1,2,6,6" in text


def test_analyze_json():
    code, text = run("--json", "analyze", "9:1,2,3,3", "--poly")
    data = json.loads(text)
    assert code == 0
    v = Verdict.from_dict(data["verdict"])
    assert v.decision.value == "NotCrepant" and v.offending.word == (2,)
    assert data["cross_check"] == {"fast": "NotCrepant", "hj": [5, 2], "dlr": False,
                                   "skipped": None, "agree": True}
    assert len(RemainderPolynomial.from_dict(data["polynomial"])) == 6


def test_poly_listing():
    code, text = run("poly", "15:1,2,6,6")
    lines = text.splitlines()
    assert code == 0 and len(lines) == 10
    assert lines[0] == "1 : (1,2,6,6)/15 age=1"
    assert lines[-1] == "x4.x4.x2 : (1,1,0,0)/2 age=1"


def test_poly_json_round_trip():
    code, text = run("poly", "15:1,2,6,6", "--json")
    p = RemainderPolynomial.from_dict(json.loads(text))
    assert len(p) == 10


def test_hj():
    assert run("hj", "15", "2", "--dim", "4") == (
        0, "[8, 2] : all entries ≡ 2 (mod 2) → crepant side\n")
    code, text = run("hj", "9", "2", "--dim", "4")
    assert "non-crepant side" in text
    assert run("hj", "15", "2") == (0, "[8, 2]\n")


def test_hj_json():
    code, text = run("hj", "15", "2", "--dim", "4", "--json")
    assert json.loads(text) == {"r": 15, "d": 2, "entries": [8, 2], "dlr": True}
    code, text = run("hj", "15", "2", "--json")
    assert json.loads(text)["dlr"] is None


def test_hj_bad_input():
    assert run("hj", "5", "0")[0] == 2
    assert run("hj", "5", "2", "--dim", "2")[0] == 2


def test_scan_includes_known_records():
    code, text = run("scan", "--dim", "4", "--rmax", "15", "--json")
    lines = [json.loads(x) for x in text.splitlines()]
    records = [ScanRecord.from_dict(x) for x in lines[:-1]]
    by_key = {(r.r, r.d, r.c): r for r in records}
    assert by_key[(15, 2, 6)].verdict_poly == "Crepant"
    assert by_key[(9, 2, 3)].verdict_poly == "NotCrepant"
    assert by_key[(9, 2, 3)].verdict_hj == "NotCrepant"
    assert by_key[(7, 0, 3)].verdict_hj is None
    assert all(r.agree for r in records)
    assert lines[-1]["summary"]["disagreements"] == 0
    assert lines[-1]["summary"]["records"] == len(records) == len(list(scan_types(4, 15)))


def test_scan_dimension_three_all_crepant():
    code, text = run("scan", "--dim", "3", "--rmax", "50", "--json")
    records = [json.loads(x) for x in text.splitlines()][:-1]
    assert code == 0 and records
    assert all(r["verdict_poly"] == "Crepant" for r in records)


def test_scan_tiny_range():
    code, text = run("scan", "--dim", "4", "--rmax", "3")
    assert code == 0
    assert text.count("\n") == 4 and "disagreements=0" in text


def test_scan_rejects_small_dim():
    assert run("scan", "--dim", "2", "--rmax", "10")[0] == 2


def test_scan_jobs_same_output():
    assert run("scan", "--dim", "5", "--rmax", "40", "--json") == \
        run("--jobs", "2", "scan", "--dim", "5", "--rmax", "40", "--json")


def test_oracle_text():
    code, text = run("oracle", "7:1,4,1,1")
    lines = text.splitlines()
    assert code == 0 and lines[0] == "witness triangulation: 7 basic simplices, volume 7"
    assert len(lines) == 8


def test_oracle_refutation():
    assert run("oracle", "9:1,2,3,3") == (0, "NoWitnessFound (exhaustive: true)\n")


def test_oracle_json():
    code, text = run("oracle", "7:1,4,1,1", "--json")
    data = json.loads(text)
    assert data["volume"] == 7 and data["exhaustive"] and len(data["simplices"]) == 7


def test_oracle_guard():
    assert run("oracle", "15:1,2,6,6")[0] == 2
    assert run("oracle", "15:1,2,6,6", "--max-r", "15")[0] == 0


def test_usage_errors():
    assert run()[0] == 2
    assert run("frobnicate")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "crepant", "hj", "7", "4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "[2, 4]\n"


def test_disagreement_exits_3(monkeypatch):
    real = cli.cross_check

    def broken(t):
        return dataclasses.replace(real(t), agree=False)

    monkeypatch.setattr(cli, "cross_check", broken)
    assert main(["scan", "--dim", "4", "--rmax", "6"], out=io.StringIO()) == 3
    assert main(["analyze", "7:1,4,1,1"], out=io.StringIO()) == 3
