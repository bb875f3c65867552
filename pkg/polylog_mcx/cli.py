"""Command-line front end: synth, verify, estimate, sweep, compare and check."""

from __future__ import annotations

import argparse
from collections.abc import Sequence
from dataclasses import replace
import json
import logging
import logging.config
from pathlib import Path
import sys
from typing import Any, TextIO

import colorlog
import voluptuous as vol

from .circuit import DepthTracker, McxError
from .config import CliConfig, build_config
from .const import (
    DEFAULT_SEED,
    DEFAULT_THRESHOLD,
    EXIT_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    PUBLIC_METHODS,
    VERIFY_MODES,
    VERIFY_TOLERANCE,
    Method,
)
from .engine import build_gate, lower_gate
from .estimator import (
    compare,
    consistency_check,
    estimate,
    log_spaced,
    sweep,
    write_csv,
)
from .gates import NAMED_GATES
from .qasm import export_qasm
from .verifier import IdealSpec, spectral_error, verify_exact

_LOGGER = logging.getLogger(__name__)

LOG_FORMAT = "%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s"


def setup_logging(verbose: bool = False, quiet: bool = False, config: Path | None = None) -> None:
    """Send package logs to stderr, coloured, or follow a dictConfig file."""
    if config is not None:
        with open(config, encoding="utf-8") as handle:
            logging.config.dictConfig(json.load(handle))
        return
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(colorlog.ColoredFormatter(LOG_FORMAT))
    root = logging.getLogger("polylog_mcx")
    root.handlers[:] = [handler]
    root.propagate = False
    if verbose:
        root.setLevel(logging.DEBUG)
    elif quiet:
        root.setLevel(logging.WARNING)
    else:
        root.setLevel(logging.INFO)


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser with one subcommand per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--threshold", type=int, help=f"base-case cutoff (default {DEFAULT_THRESHOLD})"
    )
    common.add_argument(
        "--no-conjugate-ordering",
        dest="conjugate_ordering",
        action="store_false",
        default=None,
        help="disable the mc-su2 stage cancellation",
    )
    common.add_argument("--json", action="store_true", default=None, help="print JSON output")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    common.add_argument("--log-config", type=Path, help="JSON logging dictConfig file")

    method = argparse.ArgumentParser(add_help=False)
    method.add_argument("--method", choices=[str(m) for m in PUBLIC_METHODS], required=True)
    method.add_argument("--ancillae", type=int, help="zeroed ancilla count m (adjustable)")
    method.add_argument("--epsilon", type=float, help="spectral error budget (approx)")
    method.add_argument("--unitary", choices=sorted(NAMED_GATES), help="target unitary")

    parser = argparse.ArgumentParser(
        prog="polylog_mcx",
        description="Synthesize, verify and cost multi-controlled NOT and unitary gates.",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    synth = commands.add_parser("synth", parents=[common, method], help="lower a gate to QASM")
    synth.add_argument("--n", type=int, required=True)
    synth.add_argument("--qasm-out", type=Path)

    verify = commands.add_parser("verify", parents=[common, method], help="simulate and check")
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--mode", choices=VERIFY_MODES)
    verify.add_argument("--seed", type=int, help=f"probe seed (default {DEFAULT_SEED})")

    est = commands.add_parser("estimate", parents=[common, method], help="estimate resources")
    est.add_argument("--n", type=int, required=True)

    grid = commands.add_parser("sweep", parents=[common], help="estimate over a grid")
    grid.add_argument("--methods", help="comma separated methods")
    grid.add_argument("--n-min", type=int)
    grid.add_argument("--n-max", type=int)
    grid.add_argument("--points", type=int)
    grid.add_argument("--m-grid", help="comma separated ancilla counts")
    grid.add_argument("--epsilon-grid", help="comma separated error budgets")
    grid.add_argument("--csv-out", type=Path)

    table = commands.add_parser("compare", parents=[common], help="compare with literature")
    table.add_argument("--n", type=int, required=True)
    table.add_argument("--ancillae", type=int)
    table.add_argument("--epsilon", type=float)

    check = commands.add_parser(
        "check", parents=[common, method], help="compare estimator with lowered circuits"
    )
    check.add_argument("--n-max", type=int)
    check.add_argument("--points", type=int)
    return parser


def _dump(payload: Any, stream: TextIO) -> None:
    stream.write(json.dumps(payload, indent=2, sort_keys=True))
    stream.write("\n")


def _synth(config: CliConfig, stdout: TextIO) -> int:
    gate = build_gate(config.method_id, config.n, config.u)
    circuit = lower_gate(gate, config.options)
    measured = DepthTracker(circuit.width).extend(circuit.gates).profile
    profile = replace(
        estimate(config.method_id, config.n, config.u, config.options),
        depth=measured.depth,
        cnot_count=measured.cnot_count,
        single_qubit_count=measured.single_qubit_count,
    )
    if config.qasm_out is not None:
        config.qasm_out.write_text(export_qasm(circuit), encoding="utf-8")
        _LOGGER.info("Wrote %s gates to %s", len(circuit), config.qasm_out)
    _LOGGER.info("%s on %s controls: depth %s", config.method_id, config.n, profile.depth)
    _dump({"method": str(config.method_id), "n": config.n, **profile.to_dict()}, stdout)
    return EXIT_OK


def _verify(config: CliConfig, stdout: TextIO) -> int:
    gate = build_gate(config.method_id, config.n, config.u)
    circuit = lower_gate(gate, config.options)
    spec = IdealSpec.for_gate(gate)
    report = verify_exact(circuit, spec, config.mode, seed=config.seed)
    result = {"method": str(config.method_id), "n": config.n, **report.to_dict()}
    if config.method is Method.APPROX:
        error = spectral_error(circuit, spec, seed=config.seed)
        result["spectral_error"] = error.value
        result["epsilon"] = config.epsilon
        result["passed"] = error.value <= config.epsilon + VERIFY_TOLERANCE
    _LOGGER.info(
        "%s on %s controls: %s (max deviation %.3g)",
        config.method_id,
        config.n,
        "pass" if result["passed"] else "FAIL",
        report.max_deviation,
    )
    _dump(result, stdout)
    return EXIT_OK if result["passed"] else EXIT_FAILED


def _estimate(config: CliConfig, stdout: TextIO) -> int:
    profile = estimate(config.method_id, config.n, config.u, config.options)
    _dump({"method": str(config.method_id), "n": config.n, **profile.to_dict()}, stdout)
    return EXIT_OK


def _sweep(config: CliConfig, stdout: TextIO) -> int:
    n_grid = log_spaced(config.n_min, config.n_max, config.points)
    rows = sweep(config.methods, n_grid, config.m_grid, config.epsilon_grid, config.options)
    _LOGGER.info("Swept %s rows", len(rows))
    if config.csv_out is not None:
        with open(config.csv_out, "w", encoding="utf-8", newline="") as handle:
            write_csv(rows, handle)
    elif not config.json:
        write_csv(rows, stdout)
    if config.json:
        _dump(rows, stdout)
    return EXIT_OK


def _compare(config: CliConfig, stdout: TextIO) -> int:
    table = compare(config.n, config.ancillae, config.epsilon, config.options)
    if config.json:
        _dump(table, stdout)
        return EXIT_OK
    stdout.write(f"n = {config.n}\n")
    for row in table["methods"]:
        label = row["method"]
        if row["m"] != "":
            label += f" (m={row['m']})"
        if row["epsilon"] != "":
            label += f" (eps={row['epsilon']:g})"
        stdout.write(f"  {label:<40} depth {row['depth']}\n")
    for row in table["literature"]:
        depth = "n/a" if row["depth"] is None else f"{row['depth']:.0f}"
        stdout.write(f"  {row['name']:<40} {row['expression']:<32} {depth}  [{row['source']}]\n")
    return EXIT_OK


def _check(config: CliConfig, stdout: TextIO) -> int:
    report = consistency_check(
        config.method_id, config.n_max, config.options, config.points, config.u
    )
    _dump(report.to_dict(), stdout)
    if not report.passed:
        _LOGGER.error("Estimator diverges from lowering: %s", report.divergence)
        return EXIT_FAILED
    return EXIT_OK


HANDLERS = {
    "synth": _synth,
    "verify": _verify,
    "estimate": _estimate,
    "sweep": _sweep,
    "compare": _compare,
    "check": _check,
}


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    """Run one command and return its exit code."""
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code == 0 else EXIT_USAGE
    try:
        setup_logging(args.verbose, args.quiet, args.log_config)
    except (OSError, ValueError) as err:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"cannot load logging config: {err}\n")
        return EXIT_USAGE
    try:
        config = build_config(vars(args))
    except vol.Invalid as err:
        _LOGGER.error("Invalid arguments: %s", err)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return HANDLERS[config.command](config, stdout)
    except McxError as err:
        _LOGGER.error("%s", err)
        return EXIT_USAGE


def main() -> None:
    """Console entry point."""
    sys.exit(run())
