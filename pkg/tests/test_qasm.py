"""Tests for OpenQASM export."""

import cmath
import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from polylog_mcx.circuit import (
    Barrier,
    Circuit,
    CircuitError,
    ControlledNot,
    MacroGate,
    OneQubitUnitary,
    SingleQubit,
)
from polylog_mcx.gates import NAMED_GATES, X, Y
from polylog_mcx.qasm import export_qasm, format_angle, u_angles
from polylog_mcx.verifier import circuit_unitary

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def _u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    cos, sin = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [cos, -cmath.exp(1j * lam) * sin],
            [cmath.exp(1j * phi) * sin, cmath.exp(1j * (phi + lam)) * cos],
        ]
    )


def test_empty_circuit_is_header_only():
    assert export_qasm(Circuit(2)) == HEADER + "qreg q[2];\n"


def test_cnot_line():
    text = export_qasm(Circuit(2, (ControlledNot(0, 1),)))
    assert text.count("cx q[0],q[1];") == 1
    assert text.startswith(HEADER + "qreg q[2];\n")


def test_pauli_x_line():
    text = export_qasm(Circuit(1, (SingleQubit(0, X),)))
    assert "u(pi,0,pi) q[0];" in text
    assert "global phase" not in text


def test_y_records_global_phase():
    text = export_qasm(Circuit(1, (SingleQubit(0, Y),)))
    assert "// global phase: pi/2" in text


def test_barrier_line():
    text = export_qasm(Circuit(3, (Barrier((0, 2)), Barrier(()))))
    assert text.endswith("barrier q[0],q[2];\n")


def test_macro_gate_rejected():
    with pytest.raises(CircuitError):
        export_qasm(Circuit(3, (MacroGate((0, 1), 2),)))


def test_export_is_deterministic():
    c = Circuit(2, (SingleQubit(0, NAMED_GATES["h"]), ControlledNot(0, 1), SingleQubit(1, Y)))
    assert export_qasm(c) == export_qasm(c)


@pytest.mark.parametrize("name", sorted(NAMED_GATES))
def test_u_angles_reconstruct_named_gates(name):
    u = NAMED_GATES[name]
    theta, phi, lam, phase = u_angles(u)
    rebuilt = cmath.exp(1j * phase) * _u_matrix(theta, phi, lam)
    assert np.allclose(rebuilt, u.matrix, atol=1e-12)


def test_u_angles_reconstruct_random_unitaries(rng):
    for _ in range(50):
        matrix = unitary_group.rvs(2, random_state=rng)
        u = OneQubitUnitary.from_matrix(matrix)
        theta, phi, lam, phase = u_angles(u)
        assert np.allclose(cmath.exp(1j * phase) * _u_matrix(theta, phi, lam), matrix)


def _parse_angle(text: str) -> float:
    sign = -1.0 if text.startswith("-") else 1.0
    text = text.lstrip("-")
    if "pi" not in text:
        return sign * float(text)
    head, _, denominator = text.partition("/")
    numerator = head.split("*")[0] if "*" in head else "1"
    return sign * math.pi * float(numerator) / float(denominator or 1)


def _replay_single_wire(text: str) -> np.ndarray:
    matrix = np.eye(2, dtype=complex)
    phase = 0.0
    for line in text.splitlines():
        if line.startswith("// global phase: "):
            phase = _parse_angle(line.removeprefix("// global phase: "))
        elif line.startswith("u("):
            args = line[2 : line.index(")")].split(",")
            matrix = _u_matrix(*(_parse_angle(a) for a in args)) @ matrix
    return cmath.exp(1j * phase) * matrix


def test_exported_phase_matches_simulation():
    c = Circuit(1, (SingleQubit(0, Y), SingleQubit(0, Y)))
    text = export_qasm(c)
    assert "// global phase: pi" in text
    assert np.allclose(circuit_unitary(c), np.eye(2))
    assert np.allclose(_replay_single_wire(text), np.eye(2))


def test_exported_angles_replay_to_circuit_unitary(rng):
    gates = tuple(
        SingleQubit(0, OneQubitUnitary.from_matrix(unitary_group.rvs(2, random_state=rng)))
        for _ in range(4)
    )
    c = Circuit(1, gates + (SingleQubit(0, NAMED_GATES["sx"]),))
    assert np.allclose(_replay_single_wire(export_qasm(c)), circuit_unitary(c))


@pytest.mark.parametrize(
    ("angle", "text"),
    [
        (0.0, "0"),
        (math.pi, "pi"),
        (-math.pi / 2, "-pi/2"),
        (3 * math.pi / 4, "3*pi/4"),
        (0.1, "0.1"),
    ],
)
def test_format_angle(angle, text):
    assert format_angle(angle) == text
