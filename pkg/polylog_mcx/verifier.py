"""Dense simulation, equivalence checking and spectral-norm error measurement.

Wire 0 is the most significant bit of a basis index. Every simulation works
on a tensor of shape (2,) * width + (columns,), so a whole batch of input
states moves through the circuit at once.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
import logging

import numpy as np

from .circuit import (
    PAULI_X,
    Barrier,
    Circuit,
    ControlledNot,
    MacroGate,
    McxError,
    OneQubitUnitary,
    SingleQubit,
    inverse,
    validate,
)
from .const import (
    DEFAULT_SEED,
    MAX_DENSE_SPECTRAL_WIDTH,
    MAX_REPORTED_FAILURES,
    MAX_SPECTRAL_WIDTH,
    MAX_STATE_WIDTH,
    MAX_UNITARY_WIDTH,
    POWER_ITERATION_CAP,
    POWER_ITERATION_TOLERANCE,
    RANDOM_PROBES,
    SIMULATION_CHUNK,
    VERIFY_MODES,
    VERIFY_TOLERANCE,
    ZEROED_METHODS,
)

_LOGGER = logging.getLogger(__name__)

_X = PAULI_X.matrix
_ZERO_NORM = 1e-12


class VerificationError(McxError):
    """Error to indicate a simulation request outside the supported bounds."""


@dataclass(frozen=True)
class IdealSpec:
    """The operation a circuit is supposed to implement."""

    controls: tuple[int, ...]
    target: int
    white: frozenset[int] = frozenset()
    u: OneQubitUnitary | None = None
    zeroed: tuple[int, ...] = ()
    borrowed: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        wires = (*self.controls, self.target, *self.zeroed, *self.borrowed)
        if len(set(wires)) != len(wires):
            raise VerificationError(f"ideal spec wires overlap: {wires}")
        if not self.white <= set(self.controls):
            raise VerificationError("white wires must be controls")

    @classmethod
    def for_gate(cls, gate: MacroGate) -> IdealSpec:
        """Return the spec of a macro gate, its ancillae typed by its method."""
        ancillae = tuple(gate.ancillae)
        zeroed = gate.via is not None and gate.via.method in ZEROED_METHODS
        return cls(
            controls=tuple(gate.controls),
            target=gate.target,
            white=gate.white,
            u=gate.u,
            zeroed=ancillae if zeroed else (),
            borrowed=() if zeroed else ancillae,
        )

    @property
    def gate(self) -> MacroGate:
        return MacroGate(self.controls, self.target, u=self.u, white=self.white)

    def inverse(self) -> IdealSpec:
        """Return the spec of the adjoint operation."""
        if self.u is None:
            return self
        return IdealSpec(
            self.controls, self.target, self.white, self.u.dagger(), self.zeroed, self.borrowed
        )


@dataclass(frozen=True)
class Failure:
    """One input the circuit maps away from the ideal output."""

    input: str
    expected: str
    got: str
    deviation: float

    def to_dict(self) -> dict:
        return {
            "input": self.input,
            "expected": self.expected,
            "got": self.got,
            "deviation": self.deviation,
        }


@dataclass(frozen=True)
class VerificationReport:
    """Result of comparing a circuit with its ideal operation."""

    mode: str
    max_deviation: float
    global_phase: complex
    passed: bool
    failures: tuple[Failure, ...] = ()
    tolerance: float = VERIFY_TOLERANCE
    width: int = 0
    inputs: int = 0
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "max_deviation": self.max_deviation,
            "global_phase": [self.global_phase.real, self.global_phase.imag],
            "passed": self.passed,
            "failures": [failure.to_dict() for failure in self.failures],
            "tolerance": self.tolerance,
            "width": self.width,
            "inputs": self.inputs,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SpectralError:
    """Largest singular value of realized minus ideal."""

    value: float
    iterations: int
    converged: bool
    method: str = field(default="power")

    def __float__(self) -> float:
        return self.value


def _apply(
    tensor: np.ndarray, fixed: dict[int, int], target: int, u: np.ndarray
) -> None:
    """Apply u to target on the slice where fixed wires hold their values, in place."""
    index = [slice(None)] * tensor.ndim
    for wire, value in fixed.items():
        index[wire] = value
    axis = target - sum(1 for wire in fixed if wire < target)
    view = np.moveaxis(tensor[tuple(index)], axis, 0)
    if u[0, 1] == 0 and u[1, 0] == 0:
        if u[0, 0] != 1:
            view[0] *= u[0, 0]
        if u[1, 1] != 1:
            view[1] *= u[1, 1]
    elif u[0, 0] == 0 and u[1, 1] == 0 and u[0, 1] == 1 and u[1, 0] == 1:
        swap = view[0].copy()
        view[0] = view[1]
        view[1] = swap
    else:
        view[...] = np.tensordot(u, view, axes=([1], [0]))


def _evolve(gates: Sequence, tensor: np.ndarray) -> np.ndarray:
    for gate in gates:
        if isinstance(gate, SingleQubit):
            _apply(tensor, {}, gate.target, gate.u.matrix)
        elif isinstance(gate, ControlledNot):
            _apply(tensor, {gate.control: 1}, gate.target, _X)
        elif isinstance(gate, MacroGate):
            fixed = {c: 0 if c in gate.white else 1 for c in gate.controls}
            u = gate.u.matrix if gate.u is not None else _X
            _apply(tensor, fixed, gate.target, u)
        elif not isinstance(gate, Barrier):
            raise VerificationError(f"cannot simulate {type(gate).__name__}")
    return tensor


def _batched(evolve, width: int, columns: np.ndarray) -> np.ndarray:
    step = max(1, SIMULATION_CHUNK >> width)
    out = np.empty(columns.shape, dtype=complex)
    for start in range(0, columns.shape[1], step):
        chunk = np.array(columns[:, start : start + step], dtype=complex, order="C")
        tensor = chunk.reshape((2,) * width + (chunk.shape[1],))
        out[:, start : start + step] = evolve(tensor).reshape(chunk.shape)
    return out


def _run(c: Circuit, columns: np.ndarray) -> np.ndarray:
    out = _batched(lambda tensor: _evolve(c.gates, tensor), c.width, columns)
    if c.global_phase:
        out *= np.exp(1j * c.global_phase)
    return out


def _run_ideal(spec: IdealSpec, width: int, columns: np.ndarray) -> np.ndarray:
    gate = spec.gate
    return _batched(lambda tensor: _evolve((gate,), tensor), width, columns)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Return the dense unitary of c, columns indexed by input basis states."""
    if c.width > MAX_UNITARY_WIDTH:
        raise VerificationError(
            f"dense unitary limited to {MAX_UNITARY_WIDTH} wires, got {c.width}"
        )
    return _run(c, np.eye(2**c.width, dtype=complex))


def apply_state(c: Circuit, state: np.ndarray) -> np.ndarray:
    """Return c applied to a state vector of length 2^width."""
    if c.width > MAX_STATE_WIDTH:
        raise VerificationError(
            f"state simulation limited to {MAX_STATE_WIDTH} wires, got {c.width}"
        )
    state = np.asarray(state, dtype=complex)
    if state.shape != (2**c.width,):
        raise VerificationError(
            f"state of shape {state.shape} does not match width {c.width}"
        )
    return _run(c, state.reshape(-1, 1))[:, 0]


def _allowed_indices(width: int, zeroed: Sequence[int]) -> np.ndarray:
    indices = np.arange(2**width)
    mask = 0
    for wire in zeroed:
        mask |= 1 << (width - 1 - wire)
    return indices[(indices & mask) == 0]


def _bits(index: int, width: int) -> str:
    return format(int(index), f"0{width}b")


def _check_spec(c: Circuit, spec: IdealSpec) -> None:
    problems = validate(c)
    if problems:
        raise VerificationError(f"malformed circuit: {problems[0]}")
    wires = (*spec.controls, spec.target, *spec.zeroed, *spec.borrowed)
    if max(wires) >= c.width:
        raise VerificationError(f"spec wire {max(wires)} outside width {c.width}")


def _probe_inputs(
    width: int, zeroed: Sequence[int], probes: int, seed: int
) -> tuple[np.ndarray, list[str]]:
    rng = np.random.default_rng(seed)
    allowed = _allowed_indices(width, zeroed)
    dim = 2**width
    columns = np.zeros((dim, 2 * probes), dtype=complex)
    labels = []
    for j in range(probes):
        amplitudes = rng.normal(size=len(allowed)) + 1j * rng.normal(size=len(allowed))
        columns[allowed, j] = amplitudes / np.linalg.norm(amplitudes)
        labels.append(f"random state {j}")
    for j, index in enumerate(rng.choice(allowed, size=probes)):
        columns[index, probes + j] = 1.0
        labels.append(_bits(index, width))
    return columns, labels


def verify_exact(
    c: Circuit,
    spec: IdealSpec,
    mode: str = "auto",
    tolerance: float = VERIFY_TOLERANCE,
    seed: int = DEFAULT_SEED,
    probes: int = RANDOM_PROBES,
) -> VerificationReport:
    """Compare c with spec up to one global phase.

    Borrowed ancillae must be restored for every input. Zeroed ancillae are
    only fed |0> and must come back as |0>.
    """
    if mode not in VERIFY_MODES:
        raise VerificationError(f"unknown mode {mode!r}, expected one of {VERIFY_MODES}")
    _check_spec(c, spec)
    width = c.width
    if mode == "auto":
        mode = "exhaustive" if width <= MAX_UNITARY_WIDTH else "randomized"
    if mode == "exhaustive":
        if width > MAX_UNITARY_WIDTH:
            raise VerificationError(
                f"exhaustive mode limited to {MAX_UNITARY_WIDTH} wires, got {width}"
            )
        allowed = _allowed_indices(width, spec.zeroed)
        inputs = np.zeros((2**width, len(allowed)), dtype=complex)
        inputs[allowed, np.arange(len(allowed))] = 1.0
        labels = [_bits(index, width) for index in allowed]
        report_seed = None
    else:
        if width > MAX_STATE_WIDTH:
            raise VerificationError(
                f"randomized mode limited to {MAX_STATE_WIDTH} wires, got {width}"
            )
        inputs, labels = _probe_inputs(width, spec.zeroed, probes, seed)
        report_seed = seed
    realized = _run(c, inputs)
    expected = _run_ideal(spec, width, inputs)
    overlap = np.vdot(expected, realized)
    phase = overlap / abs(overlap) if abs(overlap) > _ZERO_NORM else 1.0 + 0j
    deviations = np.linalg.norm(realized - phase * expected, axis=0)
    max_deviation = float(deviations.max(initial=0.0))
    failures = tuple(
        Failure(
            labels[j],
            _bits(np.argmax(np.abs(expected[:, j])), width),
            _bits(np.argmax(np.abs(realized[:, j])), width),
            float(deviations[j]),
        )
        for j in np.flatnonzero(deviations > tolerance)[:MAX_REPORTED_FAILURES]
    )
    report = VerificationReport(
        mode=mode,
        max_deviation=max_deviation,
        global_phase=complex(phase),
        passed=max_deviation <= tolerance,
        failures=failures,
        tolerance=tolerance,
        width=width,
        inputs=inputs.shape[1],
        seed=report_seed,
    )
    _LOGGER.debug(
        "Verified width %s in %s mode over %s inputs: max deviation %.3g",
        width,
        mode,
        report.inputs,
        max_deviation,
    )
    return report


def _projector(width: int, zeroed: Sequence[int]) -> np.ndarray:
    mask = np.zeros((2**width, 1))
    mask[_allowed_indices(width, zeroed)] = 1.0
    return mask


def spectral_error(
    c: Circuit,
    spec: IdealSpec,
    tolerance: float = POWER_ITERATION_TOLERANCE,
    max_iterations: int = POWER_ITERATION_CAP,
    seed: int = DEFAULT_SEED,
) -> SpectralError:
    """Return the spectral norm of realized minus ideal by power iteration on D^dagger D.

    Zeroed ancillae restrict the domain to their |0> subspace. When the
    iteration does not settle within max_iterations a warning is logged and
    the dense result is returned if the width allows it.
    """
    width = c.width
    if width > MAX_SPECTRAL_WIDTH:
        raise VerificationError(
            f"spectral error limited to {MAX_SPECTRAL_WIDTH} wires, got {width}"
        )
    _check_spec(c, spec)
    adjoint, ideal_adjoint = inverse(c), spec.inverse()
    mask = _projector(width, spec.zeroed)

    def forward(v: np.ndarray) -> np.ndarray:
        v = v * mask
        return _run(c, v) - _run_ideal(spec, width, v)

    def backward(w: np.ndarray) -> np.ndarray:
        return (_run(adjoint, w) - _run_ideal(ideal_adjoint, width, w)) * mask

    rng = np.random.default_rng(seed)
    x = (rng.normal(size=(2**width, 1)) + 1j * rng.normal(size=(2**width, 1))) * mask
    x /= np.linalg.norm(x)
    sigma_old = float("inf")
    for iteration in range(1, max_iterations + 1):
        dx = forward(x)
        sigma = float(np.linalg.norm(dx))
        if sigma <= _ZERO_NORM:
            return SpectralError(sigma, iteration, True)
        if abs(sigma - sigma_old) / sigma < tolerance:
            _LOGGER.debug("Power iteration settled at %.6g after %s steps", sigma, iteration)
            return SpectralError(sigma, iteration, True)
        sigma_old = sigma
        x = backward(dx)
        x /= np.linalg.norm(x)
    _LOGGER.warning(
        "Power iteration did not settle within %s steps (last value %.6g)",
        max_iterations,
        sigma_old,
    )
    if width <= MAX_DENSE_SPECTRAL_WIDTH:
        dense = dense_spectral_error(c, spec)
        return SpectralError(dense, max_iterations, False, "dense")
    return SpectralError(sigma_old, max_iterations, False)


def dense_spectral_error(c: Circuit, spec: IdealSpec) -> float:
    """Return the spectral norm of realized minus ideal from the dense matrices."""
    width = c.width
    if width > MAX_DENSE_SPECTRAL_WIDTH:
        raise VerificationError(
            f"dense spectral error limited to {MAX_DENSE_SPECTRAL_WIDTH} wires, got {width}"
        )
    _check_spec(c, spec)
    allowed = _allowed_indices(width, spec.zeroed)
    inputs = np.zeros((2**width, len(allowed)), dtype=complex)
    inputs[allowed, np.arange(len(allowed))] = 1.0
    difference = _run(c, inputs) - _run_ideal(spec, width, inputs)
    return float(np.linalg.norm(difference, 2))
