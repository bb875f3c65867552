"""Lowering engine turning macro gates into basis-gate circuits.

Synthesis routines describe a macro gate as a list of stages. Items inside
a stage act on pairwise-disjoint wires; every stage is closed by a barrier
over the gate's wires, so the ASAP depth of the lowered circuit is the sum
over stages of the deepest item. The estimator walks the same stages.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, replace
from functools import lru_cache
import logging

from .circuit import (
    PAULI_X,
    Barrier,
    Circuit,
    ControlledNot,
    Instruction,
    MacroGate,
    MethodId,
    OneQubitUnitary,
    ResourceProfile,
    Role,
    SingleQubit,
    SynthesisError,
    conjugate_white_controls,
)
from .const import (
    DEFAULT_THRESHOLD,
    MIN_THRESHOLD,
    TEMPLATE_CACHE_SIZE,
    DEFAULT_UNITARY,
    UNITARY_METHODS,
    ZEROED_METHODS,
    Method,
)
from .gates import (
    NAMED_GATES,
    controlled_unitary_network,
    special_unitary,
    toffoli_network,
)

_LOGGER = logging.getLogger(__name__)

Stage = tuple[Instruction, ...]


@dataclass(frozen=True)
class SynthOptions:
    """Options shared by every synthesis routine."""

    threshold: int = DEFAULT_THRESHOLD
    conjugate_ordering: bool = True

    def __post_init__(self) -> None:
        if self.threshold < MIN_THRESHOLD:
            raise SynthesisError(
                f"threshold must be at least {MIN_THRESHOLD}, got {self.threshold}"
            )


DEFAULT_OPTIONS = SynthOptions()

PlanFn = Callable[[MacroGate, SynthOptions], list[Stage]]
CostFn = Callable[
    [MacroGate, SynthOptions, Callable[[Instruction], ResourceProfile]], ResourceProfile
]


@dataclass(frozen=True)
class Routine:
    """Registered way of lowering a macro gate."""

    method: Method
    plan: PlanFn
    cost: CostFn | None = None


ROUTINES: dict[Method, Routine] = {}


def register(method: Method, *, cost: CostFn | None = None):
    """Register the decorated plan function as the routine for method."""

    def decorator(plan: PlanFn) -> PlanFn:
        ROUTINES[method] = Routine(method, plan, cost)
        return plan

    return decorator


def via(method: Method) -> MethodId:
    """Return the parameterless MethodId for method."""
    return _METHOD_IDS[method]


_METHOD_IDS = {
    method: MethodId(method)
    for method in Method
    if method not in (Method.ADJUSTABLE, Method.APPROX)
}


def routine_for(gate: MacroGate) -> Routine:
    """Return the routine registered for the gate's lowering method."""
    if gate.via is None:
        raise SynthesisError(f"macro gate on target {gate.target} has no lowering method")
    try:
        return ROUTINES[gate.via.method]
    except KeyError as err:
        raise SynthesisError(f"no routine registered for {gate.via}") from err


def is_leaf(gate: MacroGate) -> bool:
    """Return True for gates lowered by a fixed network regardless of method."""
    return len(gate.controls) == 1 or (gate.u is None and len(gate.controls) == 2)


def leaf_network(gate: MacroGate) -> tuple[Instruction, ...]:
    """Return the basis network of a black leaf gate."""
    controls = gate.controls
    if gate.u is None:
        if len(controls) == 1:
            return (ControlledNot(controls[0], gate.target),)
        return toffoli_network(controls[0], controls[1], gate.target)
    return controlled_unitary_network(gate.u, controls[0], gate.target)


def canonical_shape(gate: MacroGate) -> MacroGate:
    """Return the gate relabelled onto wires 0..n-1, ancillae, then the target."""
    n, k = len(gate.controls), len(gate.ancillae)
    return replace(
        gate,
        controls=range(n),
        ancillae=range(n, n + k),
        target=n + k,
        white=frozenset(),
    )


def plan_stages(gate: MacroGate, options: SynthOptions = DEFAULT_OPTIONS) -> list[Stage]:
    """Return the stages a non-leaf black gate lowers to."""
    return routine_for(gate).plan(gate, options)


def staged_circuit(
    stages: Sequence[Stage],
    wires: Sequence[int],
    width: int,
    roles: Sequence[Role] = (),
) -> Circuit:
    """Flatten stages into a macro-tier circuit, one barrier per stage."""
    fence = Barrier(tuple(wires))
    gates: list[Instruction] = []
    for stage in stages:
        gates.extend(stage)
        gates.append(fence)
    return Circuit(width, tuple(gates), tuple(roles))


@lru_cache(maxsize=TEMPLATE_CACHE_SIZE)
def template(shape: MacroGate, options: SynthOptions) -> tuple[Instruction, ...]:
    """Return the lowered instructions of a canonical macro gate."""
    if is_leaf(shape):
        return leaf_network(shape)
    _LOGGER.debug(
        "Building %s template for %s controls, %s ancillae",
        shape.via,
        len(shape.controls),
        len(shape.ancillae),
    )
    return tuple(_iter_plan(shape, options))


def _iter_plan(gate: MacroGate, options: SynthOptions) -> Iterator[Instruction]:
    fence = Barrier(gate.wires)
    for stage in plan_stages(gate, options):
        for item in stage:
            yield from _iter_item(item, options)
        yield fence


def _iter_item(item: Instruction, options: SynthOptions) -> Iterator[Instruction]:
    if not isinstance(item, MacroGate):
        yield item
        return
    if item.white:
        fence = Barrier(item.wires)
        sequence = conjugate_white_controls(item)
        flips = len(item.white)
        yield from sequence[:flips]
        yield fence
        yield from _iter_item(sequence[flips], options)
        yield fence
        yield from sequence[flips + 1 :]
        yield fence
        return
    if is_leaf(item):
        yield from leaf_network(item)
        return
    mapping = item.wires
    for instruction in template(canonical_shape(item), options):
        yield _remap(instruction, mapping)


def _remap(instruction: Instruction, mapping: Sequence[int]) -> Instruction:
    if isinstance(instruction, SingleQubit):
        return SingleQubit(mapping[instruction.target], instruction.u)
    if isinstance(instruction, ControlledNot):
        return ControlledNot(mapping[instruction.control], mapping[instruction.target])
    return Barrier(tuple(mapping[w] for w in instruction.wires))


def iter_lowered(
    gate: MacroGate, options: SynthOptions = DEFAULT_OPTIONS
) -> Iterator[Instruction]:
    """Stream the lowered instructions of a gate without caching its top level."""
    if gate.white or is_leaf(gate):
        yield from _iter_item(gate, options)
    else:
        yield from _iter_plan(gate, options)


def gate_roles(gate: MacroGate, width: int) -> tuple[Role, ...]:
    """Return per-wire roles for a circuit implementing gate."""
    roles = [Role.FREE] * width
    kind = (
        Role.ZEROED
        if gate.via is not None and gate.via.method in ZEROED_METHODS
        else Role.BORROWED
    )
    for wire in gate.ancillae:
        roles[wire] = kind
    for wire in gate.controls:
        roles[wire] = Role.CONTROL
    roles[gate.target] = Role.TARGET
    return tuple(roles)


def lower_gate(
    gate: MacroGate,
    options: SynthOptions = DEFAULT_OPTIONS,
    width: int | None = None,
) -> Circuit:
    """Return the fully lowered circuit of a single macro gate."""
    width = width if width is not None else max(gate.wires) + 1
    return Circuit(width, tuple(iter_lowered(gate, options)), gate_roles(gate, width))


def lower(c: Circuit, options: SynthOptions = DEFAULT_OPTIONS) -> Circuit:
    """Lower every macro gate of c following its `via` method."""
    gates: list[Instruction] = []
    for gate in c.gates:
        if isinstance(gate, MacroGate):
            gates.extend(iter_lowered(gate, options))
        else:
            gates.append(gate)
    return replace(c, gates=tuple(gates))


def check_distinct(*groups: Sequence[int] | int) -> None:
    """Reject overlapping wire groups."""
    wires: list[int] = []
    for group in groups:
        wires.extend([group] if isinstance(group, int) else group)
    if len(set(wires)) != len(wires):
        raise SynthesisError(f"wires must be distinct, got {wires}")


def require_ancillae(gate: MacroGate, count: int, at_least: bool = False) -> None:
    """Reject a gate whose ancilla count does not fit its routine."""
    have = len(gate.ancillae)
    if have < count or (have != count and not at_least):
        expected = f"at least {count}" if at_least else str(count)
        raise SynthesisError(f"{gate.via} needs {expected} ancillae, got {have}")


def ancilla_count(method: MethodId, n: int) -> int:
    """Return the ancilla wires a method is given for n controls."""
    match method.method:
        case Method.LADDER:
            return n - 2
        case Method.LOG_TREE:
            return n - 1
        case Method.ADJUSTABLE:
            return method.m
        case Method.APPROX | Method.MC_SU2:
            return 0
        case _:
            return 1


def minimum_controls(method: MethodId) -> int:
    """Return the smallest control count a method accepts."""
    match method.method:
        case Method.LADDER | Method.SPLIT:
            return 3
        case Method.LOG_TREE | Method.MC_SU2 | Method.APPROX:
            return 2
        case Method.ADJUSTABLE:
            return method.m
        case _:
            return 1


def build_gate(method: MethodId, n: int, u: OneQubitUnitary | None = None) -> MacroGate:
    """Return the canonical macro gate a method synthesizes for n controls."""
    if n < minimum_controls(method):
        raise SynthesisError(
            f"{method} needs at least {minimum_controls(method)} controls, got {n}"
        )
    if method.method in UNITARY_METHODS:
        u = u if u is not None else NAMED_GATES[DEFAULT_UNITARY[method.method]]
        if method.method is Method.MC_SU2:
            u = special_unitary(u)
    elif u is not None and not u.is_close(PAULI_X):
        raise SynthesisError(f"{method} synthesizes a multi-controlled NOT only")
    else:
        u = None
    k = ancilla_count(method, n)
    return MacroGate(range(n), n + k, u=u, via=method, ancillae=range(n, n + k))
