"""End-to-end checks of the command-line interface."""

import json
import subprocess
import sys

import pytest

import legpart.cli as cli
from legpart.cli import (format_oracle_csv, format_oracle_json, main,
                         parse_oracle_csv, parse_oracle_json)
from legpart.context import make_context
from legpart.series import oracle_table


def run_main(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, out


def test_oracle_csv_example(capsys):
    rc, out = run_main(["oracle", "--p", "17", "--sign", "+",
                        "--n-max", "100", "--format", "csv"], capsys)
    assert rc == 0
    lines = out.split("\n")
    assert lines[0] == "n,value"
    assert len(lines) == 103  # header + 101 rows + trailing newline
    assert lines[1 + 17] == "17,0"
    assert out == out.encode("ascii").decode("ascii")
    assert "\r" not in out


def test_oracle_more_examples(capsys):
    rc, out = run_main(["oracle", "--p", "5", "--sign", "-",
                        "--n-max", "50"], capsys)
    assert rc == 0
    assert parse_oracle_csv(out)[6] == 0
    rc, out = run_main(["oracle", "--p", "13", "--sign", "+",
                        "--n-max", "1", "--format", "json"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["rows"][1] == [1, "1"]


def test_oracle_round_trip():
    table = oracle_table(make_context(13), -1, 80)
    assert parse_oracle_csv(format_oracle_csv(table)) == list(table.values)
    assert parse_oracle_json(format_oracle_json(table)) == list(table.values)


def test_oracle_file_output_and_determinism(tmp_path):
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for f in (f1, f2):
        assert main(["oracle", "--p", "17", "--sign", "-",
                     "--n-max", "60", "--out", str(f)]) == 0
    assert f1.read_bytes() == f2.read_bytes()
    assert f1.read_bytes().endswith(b"\n")
    assert b"\r" not in f1.read_bytes()


def test_console_script_installed(tmp_path):
    # the entry point itself, run out of process
    out = subprocess.run(["legpart", "oracle", "--p", "5", "--sign", "+",
                          "--n-max", "10"], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.splitlines()[0] == "n,value"
    assert out.stdout.splitlines()[3] == "2,0"


def test_scan_examples(capsys):
    rc, out = run_main(["scan", "--p-min", "29", "--p-max", "29",
                        "--sign", "+", "--n-max", "2000"], capsys)
    assert rc == 0
    assert out.split("\n")[1] == "29,"
    rc, out = run_main(["scan", "--p-min", "5", "--p-max", "17",
                        "--sign", "+", "--n-max", "800"], capsys)
    lines = out.strip().split("\n")
    assert lines[0] == "p,vanishing_residues_mod_2p"
    assert lines[1] == "5,2"
    assert lines[2] == "13,"
    assert lines[3] == "17,17 19 25 27"
    rc, out = run_main(["scan", "--p-min", "5", "--p-max", "5",
                        "--sign", "-", "--n-max", "800"], capsys)
    assert out.strip().split("\n")[1] == "5,6"


def test_scan_skips_non_congruent_primes(capsys):
    # 7 and 11 are not 1 mod 4, 9 and 15 are not prime
    rc, out = run_main(["scan", "--p-min", "6", "--p-max", "16",
                        "--sign", "+", "--n-max", "200"], capsys)
    assert rc == 0
    ps = [line.split(",")[0] for line in out.strip().split("\n")[1:]]
    assert ps == ["13"]


def test_verify_quick_report(tmp_path, capsys):
    report = tmp_path / "report.json"
    rc, out = run_main(["verify", "--suite", "tau", "--scale", "quick",
                        "--report", str(report)], capsys)
    assert rc == 0
    assert "tau.table.p17" in out
    assert "0 fail" in out
    doc = json.loads(report.read_text())
    assert doc["schema"] == 1
    assert doc["suite"] == "tau"
    assert doc["config"]["scale"] == "quick"
    assert doc["config"]["precision"] >= 8
    assert "started" in doc and "elapsed" in doc
    for c in doc["checks"]:
        assert c["status"] in ("pass", "fail", "inconclusive")
        assert c["id"] and c["witness"]


def test_verify_dedekind_and_feq_quick(tmp_path, capsys):
    rc, out = run_main(["verify", "--suite", "dedekind", "--scale", "quick",
                        "--report", str(tmp_path / "d.json")], capsys)
    assert rc == 0
    rc, out = run_main(["verify", "--suite", "feq", "--scale", "quick",
                        "--report", str(tmp_path / "f.json")], capsys)
    assert rc == 0
    assert "feq.case2p" in out and "feq.case1" in out


def test_verify_exit_codes(tmp_path, monkeypatch, capsys):
    monkeypatch.setitem(cli.SUITE_RUNNERS, "tau", lambda scale: [
        {"id": "stub.a", "status": "inconclusive", "witness": "w"}])
    rc, _ = run_main(["verify", "--suite", "tau",
                      "--report", str(tmp_path / "r1.json")], capsys)
    assert rc == 3
    monkeypatch.setitem(cli.SUITE_RUNNERS, "tau", lambda scale: [
        {"id": "stub.a", "status": "fail", "witness": "w"},
        {"id": "stub.b", "status": "inconclusive", "witness": "w"}])
    rc, _ = run_main(["verify", "--suite", "tau",
                      "--report", str(tmp_path / "r2.json")], capsys)
    assert rc == 1


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify", "--suite", "nonsense"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["oracle", "--p", "17"])  # missing required flags
    assert e.value.code == 2
    # domain errors exit 2 without a traceback
    rc = main(["oracle", "--p", "7", "--sign", "+", "--n-max", "5"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_oracle_write_failure(capsys):
    rc = main(["oracle", "--p", "5", "--sign", "+", "--n-max", "5",
               "--out", "/nonexistent-dir/t.csv"])
    assert rc == 1
    assert "cannot write" in capsys.readouterr().err
