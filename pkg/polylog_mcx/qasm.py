"""OpenQASM 2.0 export of lowered circuits."""

import math

from .circuit import Barrier, Circuit, CircuitError, ControlledNot, OneQubitUnitary, SingleQubit

_ZERO = 1e-12
_FRACTIONS = (1, 2, 4, 8)


def _wrap(angle: float) -> float:
    """Map an angle into (-pi, pi]."""
    angle = math.remainder(angle, 2 * math.pi)
    if angle <= -math.pi + _ZERO:
        angle += 2 * math.pi
    return angle


def u_angles(u: OneQubitUnitary) -> tuple[float, float, float, float]:
    """Return (theta, phi, lam, phase) with u = e^{i phase} U(theta, phi, lam)."""
    theta = 2 * math.atan2(abs(u.c), abs(u.a))
    if abs(u.c) <= _ZERO:
        phase = math.atan2(u.a.imag, u.a.real)
        phi = 0.0
        lam = _wrap(math.atan2(u.d.imag, u.d.real) - phase)
    elif abs(u.a) <= _ZERO:
        phase = math.atan2(u.c.imag, u.c.real)
        phi = 0.0
        lam = _wrap(math.atan2(-u.b.imag, -u.b.real) - phase)
    else:
        phase = math.atan2(u.a.imag, u.a.real)
        phi = _wrap(math.atan2(u.c.imag, u.c.real) - phase)
        lam = _wrap(math.atan2(-u.b.imag, -u.b.real) - phase)
    return theta, phi, lam, phase


def format_angle(angle: float) -> str:
    """Render an angle, using pi fractions where exact."""
    if abs(angle) <= _ZERO:
        return "0"
    for denominator in _FRACTIONS:
        numerator = angle * denominator / math.pi
        whole = round(numerator)
        if whole and abs(numerator - whole) <= 1e-12:
            sign = "-" if whole < 0 else ""
            head = "pi" if abs(whole) == 1 else f"{abs(whole)}*pi"
            tail = "" if denominator == 1 else f"/{denominator}"
            return f"{sign}{head}{tail}"
    return f"{angle:.15g}"


def export_qasm(c: Circuit) -> str:
    """Return a byte-deterministic OpenQASM 2.0 rendering of a lowered circuit."""
    body = []
    phase = c.global_phase
    for gate in c.gates:
        if isinstance(gate, ControlledNot):
            body.append(f"cx q[{gate.control}],q[{gate.target}];")
        elif isinstance(gate, SingleQubit):
            theta, phi, lam, gate_phase = u_angles(gate.u)
            phase += gate_phase
            args = ",".join(format_angle(a) for a in (theta, phi, lam))
            body.append(f"u({args}) q[{gate.target}];")
        elif isinstance(gate, Barrier):
            if gate.wires:
                body.append("barrier " + ",".join(f"q[{w}]" for w in gate.wires) + ";")
        else:
            raise CircuitError("macro gate present; lower the circuit before export")
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.width}];"]
    phase = _wrap(phase)
    if abs(phase) > _ZERO:
        lines.append(f"// global phase: {format_angle(phase)}")
    return "\n".join(lines + body) + "\n"
