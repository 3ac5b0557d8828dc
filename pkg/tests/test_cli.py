import io
import json
import subprocess
import sys

import pytest

from shiftbreak import cli


def run_main(argv):
    import contextlib

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


def test_recover_end_to_end():
    code, out = run_main(
        ["recover", "--p", "13", "--e", "3", "--s", "5", "--algorithm", "zero_call_narrow"]
    )
    assert code == 0
    row = json.loads(out.strip())
    assert row["recovered"] == 5
    assert row["oracle_calls"] >= 1


def test_recover_interpolation_call_count():
    code, out = run_main(
        ["recover", "--p", "13", "--e", "3", "--s", "5", "--algorithm", "interpolation"]
    )
    assert code == 0
    assert json.loads(out.strip())["oracle_calls"] == 4


def test_recover_seeded_replay_byte_identical():
    argv = [
        "recover", "--p", "13", "--e", "3", "--s", "5",
        "--algorithm", "randomized", "--seed", "42",
    ]
    out1 = run_main(argv)
    out2 = run_main(argv)
    assert out1 == out2


def test_recover_random_secret_seeded():
    argv = ["recover", "--p", "1009", "--e", "12", "--seed", "7", "--trials", "3"]
    code, out = run_main(argv)
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert len(rows) == 3
    for row in rows:
        assert row["recovered"] == row["s"]
    assert run_main(argv)[1] == out


def test_identity_known_t():
    code, out = run_main(
        ["identity", "--p", "13", "--e", "3", "--s", "5", "--t", "4", "--mode", "exact"]
    )
    assert code == 0
    row = json.loads(out.strip())
    assert row["variant"] == "known_t"
    assert row["verdict"] == "distinct"
    assert row["probes"] <= 3


def test_identity_equal_pair():
    code, out = run_main(
        ["identity", "--p", "13", "--e", "3", "--s", "4", "--t", "4"]
    )
    assert code == 0
    assert json.loads(out.strip())["verdict"] == "equal"


def test_identity_unknown_t():
    code, out = run_main(
        ["identity", "--p", "13", "--e", "3", "--s", "5", "--seed", "3"]
    )
    assert code == 0
    row = json.loads(out.strip())
    assert row["variant"] == "unknown_t"
    assert row["verdict"] == ("equal" if row["ground_truth_equal"] else "distinct")


def test_lab_inline_and_grid(tmp_path):
    code, out = run_main(["lab", "--lemma", "coset_run", "--p", "13", "--e", "3"])
    assert code == 0
    assert json.loads(out.strip())["exact_count"] == 2

    grid = tmp_path / "grid.json"
    grid.write_text(
        json.dumps([{"p": 13, "u": 0, "v": 1, "H": 3}, {"p": 13, "u": 1, "v": 1, "H": 12}])
    )
    code, out = run_main(["lab", "--lemma", "hyperbola", "--grid", str(grid)])
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert rows[0]["exact_count"] == 1
    assert rows[1]["exact_count"] == 11


def test_lab_empty_grid(tmp_path):
    grid = tmp_path / "grid.json"
    grid.write_text("[]")
    code, out = run_main(["lab", "--lemma", "psi", "--grid", str(grid)])
    assert code == 0
    assert out == ""


def test_bench_single_cell():
    code, out = run_main(
        ["bench", "--p", "13", "--e", "12", "--trials", "2", "--seed", "1",
         "--algorithms", "interpolation", "large_e"]
    )
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert {r["algorithm"] for r in rows} == {"interpolation", "large_e"}
    interp = next(r for r in rows if r["algorithm"] == "interpolation")
    assert interp["max_calls"] == 13
    assert interp["interpolation_baseline"] == 13


def test_bench_reproducible():
    argv = ["bench", "--p", "211", "--e", "30", "--trials", "5", "--seed", "9"]
    assert run_main(argv) == run_main(argv)


def test_csv_and_table_output():
    code, out = run_main(
        ["recover", "--p", "13", "--e", "3", "--s", "5", "--output", "csv"]
    )
    assert code == 0
    header = out.splitlines()[0]
    assert "oracle_calls" in header.split(",")
    code, out = run_main(
        ["recover", "--p", "13", "--e", "3", "--s", "5", "--output", "table"]
    )
    assert code == 0
    assert "oracle_calls" in out.splitlines()[0]


def test_config_file_flags_win(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"p": 13, "e": 3, "s": 5, "seed": 3}))
    code, out = run_main(["--config", str(cfg), "recover"])
    assert code == 0
    assert json.loads(out.strip())["s"] == 5
    # explicit flag beats the config value
    code, out = run_main(["--config", str(cfg), "recover", "--s", "6"])
    assert code == 0
    assert json.loads(out.strip())["s"] == 6


def test_exit_codes():
    code, _ = run_main(["recover", "--p", "13"])  # missing e
    assert code == 2
    code, _ = run_main(["recover", "--p", "13", "--e", "3", "--algorithm", "nope"])
    assert code == 2
    code, _ = run_main(["lab", "--lemma", "unheard_of", "--p", "13"])
    assert code == 2


def test_console_script_installed():
    out = subprocess.run(
        [sys.executable, "-m", "shiftbreak.cli", "recover", "--p", "13", "--e", "3", "--s", "5"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout.strip())["recovered"] == 5
