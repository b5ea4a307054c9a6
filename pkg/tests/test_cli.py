import json

import pytest

from qcldpc.cli import main

DEMO_4x8 = "codes/demo_4x8_z32.txt"
DEMO_6x12 = "codes/demo_6x12_z16.txt"


def run_cli(*args):
    return main(list(args))


def test_run_writes_csv_report(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = run_cli(
        "run",
        "--matrix", DEMO_4x8,
        "--snr", "2.0,3.0",
        "--iters", "20",
        "--batch", "32",
        "--early-term",
        "--seed", "1",
        "--trials", "64",
        "--out", str(out),
        "--format", "csv",
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("snr,fer,avg_iterations")
    assert len(lines) == 3
    stdout = capsys.readouterr().out
    assert "snr=2" in stdout and "snr=3" in stdout


def test_run_writes_json_report(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli(
        "run",
        "--matrix", DEMO_4x8,
        "--snr", "2.5",
        "--iters", "10",
        "--batch", "16",
        "--early-term",
        "--trials", "32",
        "--out", str(out),
        "--format", "json",
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1
    assert len(doc["cells"]) == 1
    assert doc["metadata"]["matrix"]["z"] == 32


def test_schedule_summary(capsys):
    assert run_cli("schedule", "--matrix", DEMO_6x12) == 0
    out = capsys.readouterr().out
    assert "merged layers: 2" in out
    assert "k1=3" in out


def test_schedule_dump(capsys):
    assert run_cli("schedule", "--matrix", DEMO_6x12, "--dump-schedule") == 0
    assert capsys.readouterr().out == "0 1 2\n3 4 5\n"


def test_compare_schedules_command(tmp_path, capsys):
    out = tmp_path / "cmp.json"
    code = run_cli(
        "compare-schedules",
        "--matrix", DEMO_6x12,
        "--snr", "2.5",
        "--iters", "10",
        "--batch", "16",
        "--early-term",
        "--trials", "32",
        "--out", str(out),
        "--format", "json",
    )
    assert code == 0
    stdout = capsys.readouterr().out
    assert "single-row layers: 6" in stdout
    assert "merged layers: 2" in stdout
    doc = json.loads(out.read_text())
    assert doc["merged_layer_count"] == 2


def test_config_error_exit_code(capsys):
    # trials below batch size violates campaign validation
    code = run_cli(
        "run", "--matrix", DEMO_4x8, "--snr", "2.0", "--batch", "64", "--trials", "8"
    )
    assert code == 2
    assert "decode-bench:" in capsys.readouterr().err


def test_matrix_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2 4\n1 0\n-1 -1\n")
    code = run_cli("run", "--matrix", str(bad), "--snr", "2.0", "--trials", "8", "--batch", "8")
    assert code == 2
    assert "empty check row" in capsys.readouterr().err


def test_io_error_exit_code(capsys):
    code = run_cli("run", "--matrix", "no/such/file.txt", "--snr", "2.0")
    assert code == 3
    assert "i/o error" in capsys.readouterr().err


def test_bad_snr_list_is_usage_error():
    with pytest.raises(SystemExit) as err:
        run_cli("run", "--matrix", DEMO_4x8, "--snr", "fast")
    assert err.value.code == 2


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as err:
        run_cli()
    assert err.value.code == 2
