"""Circuit representation, ASAP scheduling and structural transforms."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from enum import StrEnum
import logging

import numpy as np

from .const import UNITARY_TOLERANCE, Method

_LOGGER = logging.getLogger(__name__)


class McxError(Exception):
    """Base error for the polylog_mcx package."""


class CircuitError(McxError):
    """Error to indicate a malformed circuit or a misplaced macro gate."""


class SynthesisError(McxError):
    """Error to indicate that a synthesis routine cannot handle its input."""


class Role(StrEnum):
    """Per-wire annotation driving verification semantics."""

    CONTROL = "control"
    TARGET = "target"
    ZEROED = "zeroed-ancilla"
    BORROWED = "borrowed-ancilla"
    FREE = "free"


@dataclass(frozen=True)
class OneQubitUnitary:
    """A 2x2 unitary stored as its four entries, row by row."""

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def from_matrix(cls, matrix) -> OneQubitUnitary:
        """Build from any 2x2 array-like."""
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise CircuitError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        """Return the entries as a numpy array."""
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def det(self) -> complex:
        """Return the determinant."""
        return self.a * self.d - self.b * self.c

    def dagger(self) -> OneQubitUnitary:
        """Return the conjugate transpose."""
        return OneQubitUnitary(
            self.a.conjugate(), self.c.conjugate(), self.b.conjugate(), self.d.conjugate()
        )

    def __matmul__(self, other: OneQubitUnitary) -> OneQubitUnitary:
        return OneQubitUnitary(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def is_close(self, other: OneQubitUnitary, atol: float = UNITARY_TOLERANCE) -> bool:
        """Return True when every entry matches within atol."""
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))

    def is_unitary(self, atol: float = UNITARY_TOLERANCE) -> bool:
        """Return True when U times U-dagger is the identity within atol."""
        m = self.matrix
        return bool(np.allclose(m @ m.conj().T, np.eye(2), rtol=0.0, atol=atol))


IDENTITY = OneQubitUnitary(1, 0, 0, 1)
PAULI_X = OneQubitUnitary(0, 1, 1, 0)


@dataclass(frozen=True)
class SingleQubit:
    """Arbitrary single-qubit gate."""

    target: int
    u: OneQubitUnitary

    @property
    def wires(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class ControlledNot:
    """CNOT gate."""

    control: int
    target: int

    @property
    def wires(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class MethodId:
    """A synthesis method together with the parameters it requires."""

    method: Method
    m: int | None = None
    epsilon: float | None = None

    def __post_init__(self) -> None:
        method = Method(self.method)
        object.__setattr__(self, "method", method)
        if (self.m is not None) != (method is Method.ADJUSTABLE):
            raise SynthesisError(f"{method} takes an ancilla count m only for adjustable")
        if (self.epsilon is not None) != (method is Method.APPROX):
            raise SynthesisError(f"{method} takes an epsilon only for approx")
        if self.m is not None and self.m < 2:
            raise SynthesisError(f"adjustable needs m >= 2, got {self.m}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise SynthesisError(f"approx needs epsilon > 0, got {self.epsilon}")

    def __str__(self) -> str:
        if self.m is not None:
            return f"{self.method}(m={self.m})"
        if self.epsilon is not None:
            return f"{self.method}(epsilon={self.epsilon:g})"
        return str(self.method)


@dataclass(frozen=True)
class MacroGate:
    """Multi-controlled NOT (u is None) or multi-controlled unitary.

    Controls listed in `white` fire on |0> instead of |1>. `via` names the
    routine used to lower the gate and `ancillae` the helper wires that
    routine may use. Controls and ancillae may be ranges so very wide gates
    stay cheap to build.
    """

    controls: Sequence[int]
    target: int
    u: OneQubitUnitary | None = None
    white: frozenset[int] = frozenset()
    via: MethodId | None = None
    ancillae: Sequence[int] = ()

    def __post_init__(self) -> None:
        if len(self.controls) == 0:
            raise CircuitError("macro gate needs at least one control")
        if self.target in self.controls:
            raise CircuitError(f"target {self.target} is also a control")

    @classmethod
    def with_polarity(
        cls,
        controls: Sequence[int],
        polarity: Sequence[bool],
        target: int,
        u: OneQubitUnitary | None = None,
    ) -> MacroGate:
        """Build from a per-control flag list, True meaning a black control."""
        if len(polarity) != len(controls):
            raise CircuitError("polarity length differs from the control count")
        white = frozenset(c for c, black in zip(controls, polarity) if not black)
        return cls(tuple(controls), target, u, white)

    @property
    def polarity(self) -> tuple[bool, ...]:
        return tuple(c not in self.white for c in self.controls)

    @property
    def wires(self) -> tuple[int, ...]:
        return (*self.controls, *self.ancillae, self.target)

    def black(self) -> MacroGate:
        """Return the same gate with every control black."""
        return replace(self, white=frozenset())


@dataclass(frozen=True)
class Barrier:
    """Scheduling fence: aligns the ASAP frontier of its wires."""

    wires: Sequence[int]


BasisGate = SingleQubit | ControlledNot
Instruction = SingleQubit | ControlledNot | MacroGate | Barrier


@dataclass(frozen=True)
class Circuit:
    """Immutable gate sequence over indexed wires."""

    width: int
    gates: tuple[Instruction, ...] = ()
    roles: tuple[Role, ...] = ()
    global_phase: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if not self.roles:
            object.__setattr__(self, "roles", (Role.FREE,) * self.width)
        else:
            object.__setattr__(self, "roles", tuple(Role(r) for r in self.roles))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: Circuit | Instruction) -> Circuit:
        if isinstance(other, Circuit):
            width = max(self.width, other.width)
            roles = self.roles + (Role.FREE,) * (width - self.width)
            return Circuit(
                width,
                self.gates + other.gates,
                roles,
                self.global_phase + other.global_phase,
            )
        return replace(self, gates=self.gates + (other,))

    @property
    def is_lowered(self) -> bool:
        return not any(isinstance(g, MacroGate) for g in self.gates)

    def wires_with(self, role: Role) -> tuple[int, ...]:
        """Return the wires annotated with role."""
        return tuple(w for w, r in enumerate(self.roles) if r is role)


@dataclass(frozen=True)
class ResourceProfile:
    """Depth, gate counts, ancilla usage and error bound of a construction."""

    depth: int = 0
    cnot_count: int = 0
    single_qubit_count: int = 0
    zeroed_ancillae_used: int = 0
    borrowed_ancillae_used: int = 0
    error_bound: float = 0.0

    @property
    def size(self) -> int:
        return self.cnot_count + self.single_qubit_count

    @property
    def gate_key(self) -> tuple[int, int, int]:
        """Return the (depth, cnots, singles) triple compared by consistency checks."""
        return (self.depth, self.cnot_count, self.single_qubit_count)

    def then(self, other: ResourceProfile) -> ResourceProfile:
        """Compose sequentially."""
        return ResourceProfile(
            self.depth + other.depth,
            self.cnot_count + other.cnot_count,
            self.single_qubit_count + other.single_qubit_count,
        )

    def beside(self, other: ResourceProfile) -> ResourceProfile:
        """Compose in parallel on disjoint wires."""
        return ResourceProfile(
            max(self.depth, other.depth),
            self.cnot_count + other.cnot_count,
            self.single_qubit_count + other.single_qubit_count,
        )

    def stacked(self, copies: int) -> ResourceProfile:
        """Return the profile of `copies` disjoint parallel instances."""
        return ResourceProfile(
            self.depth if copies else 0,
            self.cnot_count * copies,
            self.single_qubit_count * copies,
        )

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "cnot_count": self.cnot_count,
            "single_qubit_count": self.single_qubit_count,
            "zeroed_ancillae_used": self.zeroed_ancillae_used,
            "borrowed_ancillae_used": self.borrowed_ancillae_used,
            "error_bound": self.error_bound,
        }


class DepthTracker:
    """Streaming ASAP scheduler over lowered instructions."""

    def __init__(self, width: int) -> None:
        """Initialize an empty schedule over width wires."""
        self._frontier = [0] * width
        self.depth = 0
        self.cnot_count = 0
        self.single_qubit_count = 0

    def push(self, instruction: Instruction) -> int:
        """Schedule one instruction and return its layer (0 for barriers)."""
        frontier = self._frontier
        if isinstance(instruction, SingleQubit):
            layer = frontier[instruction.target] + 1
            frontier[instruction.target] = layer
            self.single_qubit_count += 1
        elif isinstance(instruction, ControlledNot):
            layer = max(frontier[instruction.control], frontier[instruction.target]) + 1
            frontier[instruction.control] = layer
            frontier[instruction.target] = layer
            self.cnot_count += 1
        elif isinstance(instruction, Barrier):
            if instruction.wires:
                level = max(frontier[w] for w in instruction.wires)
                for w in instruction.wires:
                    frontier[w] = level
            return 0
        else:
            raise CircuitError("macro gate present; lower the circuit first")
        if layer > self.depth:
            self.depth = layer
        return layer

    def extend(self, instructions: Iterable[Instruction]) -> DepthTracker:
        for instruction in instructions:
            self.push(instruction)
        return self

    @property
    def profile(self) -> ResourceProfile:
        return ResourceProfile(self.depth, self.cnot_count, self.single_qubit_count)


def asap_depth(c: Circuit) -> int:
    """Return the greedy earliest-slot layer count of a lowered circuit."""
    return DepthTracker(c.width).extend(c.gates).depth


def asap_layers(c: Circuit) -> list[list[BasisGate]]:
    """Return the ASAP layers of a lowered circuit, barriers omitted."""
    tracker = DepthTracker(c.width)
    layers: list[list[BasisGate]] = []
    for gate in c.gates:
        layer = tracker.push(gate)
        if layer == 0:
            continue
        while len(layers) < layer:
            layers.append([])
        layers[layer - 1].append(gate)
    return layers


def gate_counts(c: Circuit) -> tuple[int, int]:
    """Return (cnot_count, single_qubit_count) of a lowered circuit."""
    cnots = singles = 0
    for gate in c.gates:
        if isinstance(gate, ControlledNot):
            cnots += 1
        elif isinstance(gate, SingleQubit):
            singles += 1
        elif isinstance(gate, MacroGate):
            raise CircuitError("macro gate present; lower the circuit first")
    return cnots, singles


def _inverse_gate(gate: Instruction) -> Instruction:
    if isinstance(gate, SingleQubit):
        return SingleQubit(gate.target, gate.u.dagger())
    if isinstance(gate, MacroGate) and gate.u is not None:
        return replace(gate, u=gate.u.dagger())
    return gate


def inverse(c: Circuit) -> Circuit:
    """Return the adjoint circuit."""
    return Circuit(
        c.width,
        tuple(_inverse_gate(g) for g in reversed(c.gates)),
        c.roles,
        -c.global_phase,
    )


def conjugate_white_controls(g: MacroGate) -> tuple[Instruction, ...]:
    """Rewrite white controls as X conjugations around the all-black gate."""
    if not g.white:
        raise CircuitError("gate has no white controls")
    flips = tuple(SingleQubit(c, PAULI_X) for c in g.controls if c in g.white)
    if g.u is None and len(g.controls) == 1:
        core: Instruction = ControlledNot(g.controls[0], g.target)
    else:
        core = g.black()
    return (*flips, core, *flips)


def _gate_violations(gate: Instruction, width: int) -> list[str]:
    wires = tuple(gate.wires)
    problems = [
        f"wire out of range: {w} (width {width})" for w in wires if not 0 <= w < width
    ]
    if isinstance(gate, ControlledNot) and gate.control == gate.target:
        problems.append(f"control equals target: {gate.control}")
    if isinstance(gate, SingleQubit) and not gate.u.is_unitary():
        problems.append(f"non-unitary single-qubit gate on wire {gate.target}")
    if isinstance(gate, MacroGate):
        if len(set(gate.controls)) != len(gate.controls):
            problems.append("repeated control wire")
        if not gate.white <= set(gate.controls):
            problems.append("white control that is not a control")
        if set(gate.ancillae) & (set(gate.controls) | {gate.target}):
            problems.append("ancilla overlaps the gate support")
        if gate.u is not None and not gate.u.is_unitary():
            problems.append("non-unitary macro gate payload")
    return problems


def validate(c: Circuit) -> list[str]:
    """Return every invariant violation found in c; empty means well formed."""
    problems = []
    if c.width < 0:
        problems.append(f"negative width {c.width}")
    if len(c.roles) != c.width:
        problems.append(f"{len(c.roles)} roles for width {c.width}")
    for index, gate in enumerate(c.gates):
        problems.extend(f"gate {index}: {p}" for p in _gate_violations(gate, c.width))
    if problems:
        _LOGGER.debug("Circuit failed validation with %s problems", len(problems))
    return problems
