"""Tests for the command-line front end."""

from dataclasses import replace
import io
import json
from pathlib import Path

import pytest

from polylog_mcx import cli
from polylog_mcx.cli import build_parser, run
from polylog_mcx.const import CSV_HEADER, EXIT_FAILED, EXIT_OK, EXIT_USAGE


def _run(*argv: str) -> tuple[int, str]:
    stdout = io.StringIO()
    code = run(list(argv), stdout)
    return code, stdout.getvalue()


def test_synth_writes_qasm(tmp_path):
    target = tmp_path / "mcx.qasm"
    code, out = _run("synth", "--method", "polylog-borrowed", "--n", "8", "--qasm-out", str(target))
    assert code == EXIT_OK
    text = target.read_text()
    assert text.startswith('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[10];\n')
    result = json.loads(out)
    assert result["method"] == "polylog-borrowed"
    assert result["depth"] > 0
    assert text.count("cx ") == result["cnot_count"]


def test_synth_is_deterministic(tmp_path):
    first, second = tmp_path / "a.qasm", tmp_path / "b.qasm"
    _run("synth", "--method", "mc-su2", "--n", "5", "--unitary", "h", "--qasm-out", str(first))
    _run("synth", "--method", "mc-su2", "--n", "5", "--unitary", "h", "--qasm-out", str(second))
    assert first.read_bytes() == second.read_bytes()


def test_verify_adjustable():
    code, out = _run("verify", "--method", "adjustable", "--n", "6", "--ancillae", "4")
    assert code == EXIT_OK
    result = json.loads(out)
    assert result["passed"] is True
    assert result["mode"] == "exhaustive"


def test_verify_approx_uses_spectral_error():
    code, out = _run("verify", "--method", "approx", "--n", "6", "--epsilon", "0.3")
    assert code == EXIT_OK
    result = json.loads(out)
    assert 0 < result["spectral_error"] <= 0.3
    assert result["passed"] is True


def test_verify_randomized_mode():
    code, out = _run("verify", "--method", "split", "--n", "13", "--seed", "3")
    assert code == EXIT_OK
    result = json.loads(out)
    assert result["mode"] == "randomized"
    assert result["seed"] == 3


def test_estimate_approx():
    code, out = _run("estimate", "--method", "approx", "--n", "1000000", "--epsilon", "1e-7")
    assert code == EXIT_OK
    result = json.loads(out)
    assert result["error_bound"] <= 1e-7
    assert result["zeroed_ancillae_used"] == 0


def test_sweep_to_csv(tmp_path):
    target = tmp_path / "sweep.csv"
    code, _ = _run(
        "sweep",
        "--methods",
        "polylog-borrowed,split",
        "--n-min",
        "100",
        "--n-max",
        "10000",
        "--points",
        "5",
        "--csv-out",
        str(target),
    )
    assert code == EXIT_OK
    lines = target.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 11


def test_sweep_json():
    code, out = _run("sweep", "--methods", "ladder", "--n-min", "10", "--n-max", "20", "--json")
    assert code == EXIT_OK
    rows = json.loads(out)
    assert [row["n"] for row in rows][0] == 10


def test_compare_text_and_json():
    code, out = _run("compare", "--n", "1000", "--ancillae", "64")
    assert code == EXIT_OK
    assert "polylog-borrowed" in out
    assert "literature" in out
    code, out = _run("compare", "--n", "1000", "--json")
    assert code == EXIT_OK
    assert len(json.loads(out)["literature"]) == 13


def test_check_passes():
    code, out = _run("check", "--method", "polylog-borrowed", "--n-max", "64", "--points", "4")
    assert code == EXIT_OK
    assert json.loads(out)["passed"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["synth", "--method", "polylog-borrowed"],
        ["synth", "--method", "adjustable", "--n", "6"],
        ["synth", "--method", "ladder", "--n", "6", "--epsilon", "0.1"],
        ["synth", "--method", "nope", "--n", "6"],
        ["verify", "--method", "split", "--n", "2"],
        ["verify", "--method", "split", "--n", "30", "--mode", "exhaustive"],
        ["unknown"],
        [],
    ],
)
def test_usage_errors(argv):
    code, _ = _run(*argv)
    assert code == EXIT_USAGE


def test_help_exits_cleanly():
    assert run(["--help"], io.StringIO()) == EXIT_OK
    assert "synth" in build_parser().format_help()


def test_failed_verification_exit_code(monkeypatch):
    original = cli.verify_exact

    def broken(*args, **kwargs):
        return replace(original(*args, **kwargs), passed=False)

    monkeypatch.setattr(cli, "verify_exact", broken)
    code, out = _run("verify", "--method", "split", "--n", "4")
    assert code == EXIT_FAILED
    assert json.loads(out)["passed"] is False


def test_log_config_file():
    sample = Path(__file__).parents[1] / "config" / "logging.json"
    code, out = _run("estimate", "--method", "ladder", "--n", "12", "--log-config", str(sample))
    assert code == EXIT_OK
    assert json.loads(out)["depth"] == 44 * 10
    code, _ = _run("estimate", "--method", "ladder", "--n", "12", "--log-config", "missing.json")
    assert code == EXIT_USAGE


@pytest.mark.parametrize(
    "args",
    [
        ("--method", "polylog-borrowed", "--n", "7"),
        ("--method", "polylog-zeroed", "--n", "7"),
        ("--method", "ladder", "--n", "5"),
        ("--method", "split", "--n", "6"),
        ("--method", "log-tree", "--n", "5"),
        ("--method", "mcu-zeroed", "--n", "6", "--unitary", "sx"),
        ("--method", "mc-su2", "--n", "6", "--unitary", "y"),
        ("--method", "adjustable", "--n", "5", "--ancillae", "3"),
        ("--method", "approx", "--n", "7", "--epsilon", "0.05"),
        ("--method", "polylog-borrowed", "--n", "8", "--threshold", "4"),
    ],
)
def test_synthesized_gates_verify(args, tmp_path):
    target = tmp_path / "gate.qasm"
    code, out = _run("synth", *args, "--qasm-out", str(target))
    assert code == EXIT_OK
    assert target.read_text().count("cx ") == json.loads(out)["cnot_count"]
    code, out = _run("verify", *args)
    assert code == EXIT_OK
    assert json.loads(out)["passed"] is True
