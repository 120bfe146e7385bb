import json
import subprocess
import sys

import pytest

from summatoria.cli import main, parse_checkpoints


def run_cli(*argv, capsys):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_compute_mertens_csv(capsys):
    status, out, _ = run_cli("compute", "--function", "mu", "--N", "10",
                             "--checkpoints", "10", capsys=capsys)
    assert status == 0
    assert out == "n,S\n10,-1\n"


def test_compute_default_checkpoints(capsys):
    status, out, _ = run_cli("compute", "--function", "lambda", "--N", "100",
                             capsys=capsys)
    assert status == 0
    lines = out.splitlines()
    assert lines[0] == "n,S"
    assert [row.split(",")[0] for row in lines[1:]] == ["10", "20", "40", "80"]


def test_compute_to_file_and_repeatability(tmp_path, capsys):
    target = tmp_path / "trace.csv"
    args = ("compute", "--function", "mu-over-k", "--N", "50000",
            "--checkpoints", "geometric(10,4)", "--output", str(target))
    assert run_cli(*args, capsys=capsys)[0] == 0
    first = target.read_bytes()
    assert run_cli(*args, capsys=capsys)[0] == 0
    assert target.read_bytes() == first


def test_compute_thread_count_does_not_change_bytes(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ("compute", "--function", "mu-over-k", "--N", "200000",
            "--checkpoints", "geometric(10,2)")
    assert run_cli(*base, "--threads", "1", "--output", str(a), capsys=capsys)[0] == 0
    assert run_cli(*base, "--threads", "4", "--output", str(b), capsys=capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verdict_log2_example(capsys):
    status, out, _ = run_cli("verdict", "--function", "synth:log2",
                             "--N", "1000000", "--checkpoints", "geometric(10,2)",
                             capsys=capsys)
    assert status == 0
    doc = json.loads(out)
    assert doc["conditions_met"] is True
    assert doc["mu0_hat"] == pytest.approx(0.5, abs=1e-3)
    assert list(doc) == ["function", "N", "checkpoints", "mu0_hat", "mean_rate",
                         "asymptotic_form", "ks_trace", "conditions_met", "notes"]


def test_verdict_rejects_csv_format(capsys):
    status, _, err = run_cli("verdict", "--function", "mu", "--N", "100",
                             "--format", "csv", capsys=capsys)
    assert status == 1
    assert "JSON" in err


def test_synth_csv_and_schedule_json(capsys):
    status, out, _ = run_cli("synth", "--function", "synth:log", "--N", "4",
                             capsys=capsys)
    assert status == 0
    assert out.splitlines()[0] == "k,f"
    assert len(out.splitlines()) == 5
    status, out, _ = run_cli("synth", "--function", "synth:log", "--N", "4",
                             "--format", "json", capsys=capsys)
    assert status == 0
    doc = json.loads(out)
    assert doc["perturbation"]["kind"] == "log"
    assert doc["values"] == [1.0, -1.0]


def test_file_sequence_round_trip(tmp_path, capsys):
    path = tmp_path / "seq.csv"
    status, out, _ = run_cli("synth", "--function", "synth:log2", "--N", "1000",
                             "--output", str(path), capsys=capsys)
    assert status == 0
    status, out, _ = run_cli("compute", "--function", f"file:{path}", "--N", "1000",
                             "--checkpoints", "10,1000", capsys=capsys)
    assert status == 0
    rows = out.splitlines()
    assert rows[1].startswith("10,") and rows[2].startswith("1000,")


def test_analyze_json_report(capsys):
    status, out, _ = run_cli("analyze", "--function", "mu", "--N", "10000",
                             "--lag", "1,2", capsys=capsys)
    assert status == 0
    doc = json.loads(out)
    assert doc["N"] == 10000
    assert [entry["h"] for entry in doc["independence"]] == [1, 2]
    assert doc["variance"] > 0
    status, out, _ = run_cli("analyze", "--function", "mu", "--N", "1000",
                             "--format", "csv", capsys=capsys)
    assert status == 0
    assert out.splitlines()[0] == "n,mean,variance,ks_normal_D,h,rho"


def test_selftest_passes(capsys):
    status, out, _ = run_cli("selftest", "--seed", "20260810", capsys=capsys)
    assert status == 0
    assert "0 failed" in out


def test_validation_errors_exit_one(capsys):
    assert run_cli("compute", "--function", "nosuch", "--N", "10", capsys=capsys)[0] == 1
    assert run_cli("compute", "--function", "mu", capsys=capsys)[0] == 1
    assert run_cli("compute", "--function", "mu", "--N", "10",
                   "--checkpoints", "20,30", capsys=capsys)[0] == 1
    assert run_cli("compute", "--function", "mu", "--N", "10",
                   "--checkpoints", "geometric(10,0.5)", capsys=capsys)[0] == 1
    assert run_cli("compute", "--function", "mu", "--N", "0", capsys=capsys)[0] == 1
    status, _, err = run_cli("compute", "--function", "mu", "--N", "10",
                             "--output", "/nonexistent-dir/x.csv", capsys=capsys)
    assert status == 1
    assert "cannot write" in err


def test_capacity_error_exits_two(capsys, monkeypatch):
    monkeypatch.setenv("SUMMATORIA_BLOCK_SIZE", str(1 << 30))
    status, _, err = run_cli("compute", "--function", "mu", "--N", "100",
                             "--checkpoints", "100", capsys=capsys)
    assert status == 2
    assert "budget" in err


def test_block_size_env_var_changes_blocking_not_results(capsys, monkeypatch):
    status, base, _ = run_cli("compute", "--function", "mu", "--N", "5000",
                              "--checkpoints", "geometric(10,3)", capsys=capsys)
    monkeypatch.setenv("SUMMATORIA_BLOCK_SIZE", "64")
    status2, small, _ = run_cli("compute", "--function", "mu", "--N", "5000",
                                "--checkpoints", "geometric(10,3)", capsys=capsys)
    assert status == status2 == 0
    assert base == small


def test_config_file_with_flag_override(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({
        "function": "mu",
        "N": 100,
        "checkpoints": "10,100",
        "format": "csv",
    }))
    status, out, _ = run_cli("compute", "--config", str(config), capsys=capsys)
    assert status == 0
    assert out == "n,S\n10,-1\n100,1\n"
    # explicit flag wins over the config value
    status, out, _ = run_cli("compute", "--config", str(config),
                             "--checkpoints", "10", capsys=capsys)
    assert status == 0
    assert out == "n,S\n10,-1\n"


def test_parse_checkpoints_forms():
    assert parse_checkpoints("10,20,40", 100).tolist() == [10, 20, 40]
    assert parse_checkpoints("geometric(10,2)", 100).tolist() == [10, 20, 40, 80]
    with pytest.raises(Exception):
        parse_checkpoints("geometric(10,2) extra", 100)


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "summatoria.cli", "compute", "--function", "mu",
         "--N", "10", "--checkpoints", "10"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "n,S\n10,-1\n"
