"""Small-matrix constructions: ABC decomposition, principal roots, Toffoli."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy.linalg import schur

from .circuit import (
    IDENTITY,
    PAULI_X,
    Circuit,
    ControlledNot,
    McxError,
    OneQubitUnitary,
    SingleQubit,
    asap_depth,
)
from .const import IDENTITY_TOLERANCE, SPECIAL_UNITARY_TOLERANCE

_LOGGER = logging.getLogger(__name__)

_SQRT_HALF = 1 / math.sqrt(2)

I = IDENTITY
X = PAULI_X
Y = OneQubitUnitary(0, -1j, 1j, 0)
Z = OneQubitUnitary(1, 0, 0, -1)
H = OneQubitUnitary(_SQRT_HALF, _SQRT_HALF, _SQRT_HALF, -_SQRT_HALF)
S = OneQubitUnitary(1, 0, 0, 1j)
T = OneQubitUnitary(1, 0, 0, cmath.exp(1j * math.pi / 4))
TDG = T.dagger()
SX = OneQubitUnitary(0.5 + 0.5j, 0.5 - 0.5j, 0.5 - 0.5j, 0.5 + 0.5j)

NAMED_GATES = {"i": I, "x": X, "y": Y, "z": Z, "h": H, "s": S, "t": T, "sx": SX}


class NotSpecialUnitaryError(McxError):
    """Error to indicate that a matrix does not have determinant 1."""


def rz(angle: float) -> OneQubitUnitary:
    """Return diag(e^{-i angle/2}, e^{i angle/2})."""
    return OneQubitUnitary(cmath.exp(-0.5j * angle), 0, 0, cmath.exp(0.5j * angle))


def ry(angle: float) -> OneQubitUnitary:
    """Return the real Y rotation by angle."""
    cos, sin = math.cos(angle / 2), math.sin(angle / 2)
    return OneQubitUnitary(cos, -sin, sin, cos)


def phase(angle: float) -> OneQubitUnitary:
    """Return diag(1, e^{i angle})."""
    return OneQubitUnitary(1, 0, 0, cmath.exp(1j * angle))


def special_unitary(u: OneQubitUnitary) -> OneQubitUnitary:
    """Return u divided by a square root of its determinant."""
    root = cmath.sqrt(u.det)
    return OneQubitUnitary(u.a / root, u.b / root, u.c / root, u.d / root)


def zyz_angles(w: OneQubitUnitary) -> tuple[float, float, float]:
    """Return (alpha, theta, beta) with w = Rz(alpha) Ry(theta) Rz(beta) for w in SU(2)."""
    cos, sin = abs(w.d), abs(w.c)
    theta = 2 * math.atan2(sin, cos)
    total = 2 * cmath.phase(w.d) if cos > IDENTITY_TOLERANCE else 0.0
    difference = 2 * cmath.phase(w.c) if sin > IDENTITY_TOLERANCE else 0.0
    return (total + difference) / 2, theta, (total - difference) / 2


@dataclass(frozen=True)
class AbcTriple:
    """A, B, C with A B C = I and A X B X C = W."""

    a: OneQubitUnitary
    b: OneQubitUnitary
    c: OneQubitUnitary


def abc_decompose(w: OneQubitUnitary) -> AbcTriple:
    """Split a special unitary into the A, B, C factors of a singly controlled W."""
    det = w.det
    if abs(det - 1) > SPECIAL_UNITARY_TOLERANCE:
        raise NotSpecialUnitaryError(f"determinant {det:.12g} is not 1")
    alpha, theta, beta = zyz_angles(w)
    return AbcTriple(
        a=rz(alpha) @ ry(theta / 2),
        b=ry(-theta / 2) @ rz(-(alpha + beta) / 2),
        c=rz((beta - alpha) / 2),
    )


def principal_root(u: OneQubitUnitary, k: int) -> OneQubitUnitary:
    """Return the 2^k-th root of u whose eigenphases lie in (-pi/2^k, pi/2^k]."""
    if k < 0:
        raise McxError(f"root order must be nonnegative, got {k}")
    if k == 0:
        return u
    triangular, basis = schur(u.matrix, output="complex")
    phases = np.angle(np.diag(triangular))
    # eigenvalue -1 takes the +pi branch
    phases = np.where(phases <= -math.pi + 1e-12, math.pi, phases)
    root = basis @ np.diag(np.exp(1j * phases / 2**k)) @ basis.conj().T
    return OneQubitUnitary.from_matrix(root)


def controlled_unitary_network(
    u: OneQubitUnitary, control: int, target: int
) -> tuple[SingleQubit | ControlledNot, ...]:
    """Return the basis gates of C^1(u), phase exact."""
    if u.is_close(IDENTITY, IDENTITY_TOLERANCE):
        return ()
    if u.is_close(PAULI_X, IDENTITY_TOLERANCE):
        return (ControlledNot(control, target),)
    delta = cmath.phase(u.det) / 2
    abc = abc_decompose(special_unitary(u))
    trivial = [m.is_close(IDENTITY, IDENTITY_TOLERANCE) for m in (abc.c, abc.b, abc.a)]
    gates: list[SingleQubit | ControlledNot] = []
    if not trivial[0]:
        gates.append(SingleQubit(target, abc.c))
    if not all(trivial):
        gates.append(ControlledNot(control, target))
        if not trivial[1]:
            gates.append(SingleQubit(target, abc.b))
        gates.append(ControlledNot(control, target))
        if not trivial[2]:
            gates.append(SingleQubit(target, abc.a))
    if abs(delta) > IDENTITY_TOLERANCE:
        gates.append(SingleQubit(control, phase(delta)))
    return tuple(gates)


def controlled_unitary(u: OneQubitUnitary, control: int, target: int) -> Circuit:
    """Return a lowered circuit equal to C^1(u) including phase."""
    if control == target:
        raise McxError("control equals target")
    network = controlled_unitary_network(u, control, target)
    return Circuit(max(control, target) + 1, network)


def toffoli_network(c1: int, c2: int, target: int) -> tuple[SingleQubit | ControlledNot, ...]:
    """Return the standard 6-CNOT, 9-single-qubit CCX network."""
    return (
        SingleQubit(target, H),
        ControlledNot(c2, target),
        SingleQubit(target, TDG),
        ControlledNot(c1, target),
        SingleQubit(target, T),
        ControlledNot(c2, target),
        SingleQubit(target, TDG),
        ControlledNot(c1, target),
        SingleQubit(c2, T),
        SingleQubit(target, T),
        SingleQubit(target, H),
        ControlledNot(c1, c2),
        SingleQubit(c1, T),
        SingleQubit(c2, TDG),
        ControlledNot(c1, c2),
    )


def toffoli_circuit(c1: int, c2: int, target: int) -> Circuit:
    """Return a lowered circuit equal to CCX."""
    if len({c1, c2, target}) != 3:
        raise McxError(f"Toffoli needs three distinct wires, got {(c1, c2, target)}")
    return Circuit(max(c1, c2, target) + 1, toffoli_network(c1, c2, target))


TOFFOLI_DEPTH = asap_depth(toffoli_circuit(0, 1, 2))
