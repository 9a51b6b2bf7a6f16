"""End-to-end tests of the nilsoliton command line"""
import io
import json

import pytest

from catalog import family, metric
from main import EXIT_ANSATZ, EXIT_DEGENERATE, EXIT_OK, EXIT_USAGE, main
from report import Report, build_report, connection_section, validate_dict


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    assert code == EXIT_OK
    return json.loads(text)


def test_list_families():
    code, text = run("list")
    assert code == EXIT_OK
    assert sum(1 for line in text.splitlines() if line.startswith("  ")) == 13
    listing = run_json("list", "--all")
    assert sum(len(entry["families"]) for entry in listing) == 17


def test_list_theorems():
    rows = run_json("list", "--theorems")
    assert [row["theorem"] for row in rows] == [2, 3, 4, 5, 7, 8]


def test_report_without_connection_discrepancies():
    payload = run_json("report", "g0_1")
    validate_dict(payload)
    assert payload["sections"]["connection"]["matches_printed"] is True
    assert not [d for d in payload["discrepancy_log"] if d["source"].startswith("connection")]
    assert payload["sections"]["ricci"]["frame"] == {"(4,4)": "1/2"}


def test_report_logs_connection_discrepancy():
    payload = run_json("report", "general_diag")
    assert payload["sections"]["connection"]["matches_printed"] is False
    entries = [d["entry"] for d in payload["discrepancy_log"] if d["source"] == "connection general_diag"]
    assert "(1,3)" in entries


def test_report_with_binding():
    payload = run_json("report", "g1_lambda", "--param", "lambda=1")
    assert payload["binding"] == {"lambda": "1"}
    assert payload["sections"]["ricci"]["frame"] == {}
    assert payload["sections"]["ricci"]["scalar"] == "0"
    assert payload["sections"]["soliton_certificates"] == []


def test_report_is_deterministic():
    assert run("report", "g_mu", "--param", "mu=2", "--json") == run("report", "g_mu", "--param", "mu=2", "--json")


def test_report_text_summary():
    code, text = run("report", "g_mu", "--param", "mu=2")
    assert code == EXIT_OK
    assert "REPORT: g_mu" in text
    assert "Discrepancies:" in text


def test_check_steady_theorem():
    payload = run_json("check", "8")
    validate_dict(payload)
    assert payload["kind"] == "check"
    (certificate,) = payload["sections"]["soliton_certificates"]
    assert certificate["verified"] is True
    assert certificate["classification"] == "Steady"


def test_check_variant():
    payload = run_json("check", "2", "--param", "variant=g_mu")
    (certificate,) = payload["sections"]["soliton_certificates"]
    assert certificate["family"] == "g_mu"
    assert certificate["resolution"]["alpha"] == "-6"


def test_solve_euclidean_killing_fields():
    payload = run_json("solve", "euclidean", "--degree", "1", "--alpha", "0")
    validate_dict(payload)
    assert payload["sections"]["solution_space"]["dimension"] == 10
    assert payload["sections"]["solution_space"]["verified"] is True


def test_solve_without_solution():
    code, text = run("solve", "euclidean", "--degree", "0", "--alpha", "1")
    assert code == EXIT_OK
    assert text.startswith("No solution")


@pytest.mark.parametrize("argv", [
    [],
    ["report"],
    ["report", "no_such_family"],
    ["solve", "g_mu", "--param", "mu=-1"],
    ["solve", "g_mu", "--alpha", "0.5"],
    ["check", "6"],
    ["check", "2", "--param", "mu=2"],
    ["flow", "--initial", "1,1,1"],
    ["list", "--group", "SU2"],
    ["frobnicate"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_ansatz_cap_exit_code(monkeypatch):
    monkeypatch.setenv("NILSOLITON_ANSATZ_MAX_UNKNOWNS", "10")
    assert run("solve", "euclidean", "--degree", "1")[0] == EXIT_ANSATZ


def test_degenerate_flow_exit_code():
    assert run("flow", "--initial", "1,1,0,-1")[0] == EXIT_DEGENERATE


def test_flow_outputs(tmp_path):
    code, text = run("flow", "--initial", "1,1,1,-1", "--step", "0.01", "--t-end", "0.05")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == "t,f1,f2,f3,f4"
    assert len(lines) == 7
    target = tmp_path / "trajectory.json"
    assert run("flow", "--initial", "1,1,1,-1", "--t-end", "0.01", "--out", str(target))[0] == EXIT_OK
    assert json.loads(target.read_text(encoding="utf-8"))["family"] == "diagonal_flow"


def test_report_round_trip(tmp_path):
    report = build_report("g4_lambda", {"lambda": 2})
    report.validate()
    path = tmp_path / "reports" / "g4.json"
    report.save(str(path))
    loaded = Report.from_dict(json.loads(path.read_text(encoding="utf-8")))
    assert loaded.to_json() == report.to_json()
    assert loaded.summary() == report.summary()


@pytest.mark.parametrize("family_id,entries", [
    ("g0_3", set()),
    ("g0_2", {"(1,2)", "(3,1)"}),
    ("g2_lambda", {"(3,1)", "(3,2)", "(4,3)"}),
])
def test_printed_connection_entries(family_id, entries):
    report = Report("report", family(family_id).group, family_id)
    section = connection_section(family_id, metric(family_id), {}, report)
    assert {d["entry"] for d in report.discrepancy_log} == entries
    assert section["matches_printed"] is (not entries)
    assert bool(section["notes"]) is bool(entries)


def test_check_all_is_deterministic():
    first = run("check", "--all", "--json", "--jobs", "1")
    assert first == run("check", "--all", "--json", "--jobs", "1")
    payload = json.loads(first[1])
    validate_dict(payload)
    assert len(payload["sections"]["soliton_certificates"]) == 8
