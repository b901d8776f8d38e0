import json

import pytest

from tysys.cli import main, parse_window

A2_TEXT = "2\n2 -1\n-1 2\n"
A1_TEXT = "1\n2\n"
MIXED44_TEXT = "# rank 4, one triple and two double bonds\n4\n" \
               "2 -1 0 0\n-3 2 -2 -2\n0 -1 2 -1\n0 -1 -1 2\n"
BA2_TEXT = "2\n0 1\n-1 0\n+: 1\n"
CYCLE3_TEXT = "3\n2 -1 -1\n-1 2 -1\n-1 -1 2\n"


@pytest.fixture
def a2_file(tmp_path):
    path = tmp_path / "a2.txt"
    path.write_text(A2_TEXT)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_parse_window():
    assert parse_window("0..8") == (0, 8)
    assert parse_window("-4..12") == (-4, 12)


def test_cartan_check_mixed44(tmp_path, capsys):
    path = tmp_path / "m44.txt"
    path.write_text(MIXED44_TEXT)
    code, report = run_cli(capsys, "cartan", "check", str(path))
    assert code == 0
    assert report["d"] == [3, 1, 2, 2]
    assert report["t"] == 6
    assert report["tamely_laced"] is True
    assert report["bipartition"] is None


def test_cartan_check_rejects_bad_matrix(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2\n2 -2\n-1 2\n")  # not symmetrizable? ratios fine: d=(1,2)
    code, report = run_cli(capsys, "cartan", "check", str(path))
    assert code == 0  # valid generalized Cartan matrix, just not simply laced
    path.write_text("2\n2 0\n-1 2\n")
    code, report = run_cli(capsys, "cartan", "check", str(path))
    assert code == 1 and report["pass"] is False


def test_usage_error_exit_code(tmp_path, capsys):
    path = tmp_path / "garbled.txt"
    path.write_text("not a matrix\n")
    assert main(["cartan", "check", str(path)]) == 2
    assert main(["sys", "solve-t", str(path), "--level", "2"]) == 2


def test_gen_t_relations(a2_file, capsys):
    code, report = run_cli(capsys, "sys", "gen-t", a2_file,
                           "--level", "2", "--window", "0..3")
    assert code == 0
    assert len(report["relations"]) == 4
    first = report["relations"][0]
    assert set(first) == {"center", "lhs", "termA", "termM"}


def test_solve_t_and_t2y_pipeline(a2_file, tmp_path, capsys):
    table_path = str(tmp_path / "table.json")
    code, report = run_cli(capsys, "sys", "solve-t", a2_file, "--level", "2",
                           "--window", "0..20", "--seed", "7",
                           "--out", table_path)
    assert code == 0 and report["pass"]
    assert report["relations_checked"] > 0
    code, report = run_cli(capsys, "sys", "t2y", a2_file, "--level", "2",
                           "--in", table_path)
    assert code == 0 and report["pass"]


def test_solve_t_a1_constant_relation(tmp_path, capsys):
    path = tmp_path / "a1.txt"
    path.write_text(A1_TEXT)
    table_path = str(tmp_path / "a1table.json")
    code, report = run_cli(capsys, "sys", "solve-t", str(path), "--level", "2",
                           "--window", "0..8", "--seed", "7", "--out", table_path)
    assert code == 0 and report["pass"]
    data = json.loads(open(table_path).read())
    from fractions import Fraction

    values = {row["k"]: Fraction(row["value"]) for row in data["entries"]}
    for k in range(1, 8):
        assert values[k - 1] * values[k + 1] == 2


def test_solve_y_y2t_roundtrip(a2_file, tmp_path, capsys):
    ytable = str(tmp_path / "ytable.json")
    code, report = run_cli(capsys, "sys", "solve-y", a2_file,
                           "--level", "unrestricted", "--mcap", "3",
                           "--window", "0..14", "--seed", "3", "--out", ytable)
    assert code == 0 and report["pass"]
    code, report = run_cli(capsys, "sys", "y2t", a2_file,
                           "--level", "unrestricted", "--mcap", "3",
                           "--in", ytable, "--roundtrip", "--seed", "5")
    assert code == 0 and report["pass"]
    assert report["compared"] > 20


def test_y2t_rejects_restricted(a2_file, tmp_path, capsys):
    ytable = str(tmp_path / "ytable.json")
    run_cli(capsys, "sys", "solve-y", a2_file, "--level", "2",
            "--window", "0..10", "--seed", "3", "--out", ytable)
    code = main(["sys", "y2t", a2_file, "--level", "2", "--in", ytable])
    capsys.readouterr()
    assert code == 2


def test_identities_command(a2_file, capsys):
    code, report = run_cli(capsys, "sys", "identities", a2_file)
    assert code == 0 and report["pass"]


def test_cluster_run_and_verify(tmp_path, capsys):
    path = tmp_path / "ba2.txt"
    path.write_text(BA2_TEXT)
    out = str(tmp_path / "seq.json")
    code, report = run_cli(capsys, "cluster", "run", str(path),
                           "--steps", "6", "--out", out)
    assert code == 0
    dumped = json.loads(open(out).read())
    assert "(1,0)" in dumped["x"]
    code, report = run_cli(capsys, "cluster", "verify", str(path), "--steps", "12")
    assert code == 0 and report["pass"]


def test_cluster_correspond(tmp_path, capsys):
    path = tmp_path / "c3.txt"
    path.write_text(CYCLE3_TEXT)
    code, report = run_cli(capsys, "cluster", "correspond", str(path),
                           "--level", "2")
    assert code == 0 and report["pass"]
    assert report["routed_through_double"]


def test_period_scan(a2_file, capsys):
    code, report = run_cli(capsys, "period", "scan", a2_file, "--level", "2",
                           "--window", "0..24", "--max-period", "12",
                           "--seed", "11")
    assert code == 0
    assert report["period"] == 10


def test_reports_are_reproducible(a2_file, capsys):
    args = ("sys", "solve-t", a2_file, "--level", "3", "--window", "0..16",
            "--seed", "42")
    main(list(args))
    first = capsys.readouterr().out
    main(list(args))
    second = capsys.readouterr().out
    assert first == second


def test_verify_all_smoke(capsys):
    code = main(["verify", "all"])
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    assert code == 0 and report["pass"]
    assert len(report["criteria"]) == 10
    assert "criterion" in captured.err
