"""Polylogarithmic-depth MCX with one ancilla, and the controlled-unitary corollaries."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import logging
import math

from .baselines import mcx
from .circuit import (
    PAULI_X,
    Circuit,
    ControlledNot,
    Instruction,
    MacroGate,
    OneQubitUnitary,
    SingleQubit,
    SynthesisError,
)
from .const import Method
from .engine import (
    DEFAULT_OPTIONS,
    Stage,
    SynthOptions,
    check_distinct,
    lower_gate,
    register,
    require_ancillae,
    staged_circuit,
    via,
)
from .gates import abc_decompose

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Partition:
    """Split of the control register into R0 and blocks R_1..R_b of at most p wires."""

    p: int
    r0: Sequence[int]
    r0_star: Sequence[int]
    r0_prime: Sequence[int]
    blocks: tuple[Sequence[int], ...]

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def r(self) -> int:
        return len(self.blocks[-1])


def make_partition(controls: int | Sequence[int]) -> Partition:
    """Return the partition of n controls (or of the given control wires)."""
    if isinstance(controls, int):
        controls = range(controls)
    n = len(controls)
    if n < 5:
        raise SynthesisError(f"partition needs at least 5 controls, got {n}")
    p = math.isqrt(n)
    r0 = controls[: 2 * p]
    blocks = []
    for i in range(1, p + 1):
        block = controls[(1 + i) * p : (2 + i) * p]
        if not block:
            break
        blocks.append(block)
    b = len(blocks)
    return Partition(p, r0, r0[:b], r0[b:], tuple(blocks))


def frak_c_stages(part: Partition, a: int, t: int) -> list[Stage]:
    """Return the block product, the white-controlled middle gate, and the block product."""
    blocks = tuple(
        mcx(block, part.r0_star[i], Method.POLYLOG_BORROWED, (part.r0_prime[i],))
        for i, block in enumerate(part.blocks)
    )
    middle_controls = (*part.r0_star, a)
    middle = MacroGate(
        middle_controls,
        t,
        white=frozenset(part.r0_star),
        via=via(Method.POLYLOG_BORROWED) if len(middle_controls) > 2 else None,
        ancillae=(part.r0_prime[0],) if len(middle_controls) > 2 else (),
    )
    return [blocks, (middle,), blocks]


def synth_frak_C(part: Partition, a: int, t: int) -> Circuit:
    """Return the macro-tier circuit flipping t on a and matching block activations."""
    controls = (*part.r0, *(w for block in part.blocks for w in block))
    check_distinct(controls, a, t)
    wires = (*controls, a, t)
    return staged_circuit(frak_c_stages(part, a, t), wires, max(wires) + 1)


def _r0_gate(part: Partition, a: int) -> MacroGate:
    return mcx(part.r0, a, Method.POLYLOG_BORROWED, (part.blocks[0][0],))


def borrowed_stages(
    controls: Sequence[int], a: int, t: int, options: SynthOptions
) -> list[Stage]:
    """Return the stages of C^n(X) on controls into t, borrowing wire a."""
    n = len(controls)
    if n <= options.threshold:
        return [(mcx(controls, t, Method.BASE, (a,)),)]
    part = make_partition(controls)
    _LOGGER.debug("Partitioned %s controls: p=%s b=%s r=%s", n, part.p, part.b, part.r)
    frak = frak_c_stages(part, a, t)
    r0_gate = _r0_gate(part, a)
    return [(r0_gate,), *frak, (r0_gate,), *frak]


@register(Method.POLYLOG_BORROWED)
def plan_mcx_one_borrowed(gate: MacroGate, options: SynthOptions) -> list[Stage]:
    require_ancillae(gate, 1)
    return borrowed_stages(gate.controls, gate.ancillae[0], gate.target, options)


@register(Method.POLYLOG_ZEROED)
def plan_mcx_one_zeroed(gate: MacroGate, options: SynthOptions) -> list[Stage]:
    require_ancillae(gate, 1)
    a, n = gate.ancillae[0], len(gate.controls)
    if n < 5:
        return [(mcx(gate.controls, gate.target, Method.BASE, (a,)),)]
    part = make_partition(gate.controls)
    r0_gate = _r0_gate(part, a)
    return [(r0_gate,), *frak_c_stages(part, a, gate.target), (r0_gate,)]


def synth_mcx_one_borrowed(
    controls: Sequence[int], a: int, t: int, options: SynthOptions = DEFAULT_OPTIONS
) -> Circuit:
    """Return C^n(X) restoring the borrowed ancilla a for every initial state."""
    check_distinct(controls, a, t)
    gate = MacroGate(tuple(controls), t, via=via(Method.POLYLOG_BORROWED), ancillae=(a,))
    return lower_gate(gate, options)


def synth_mcx_one_zeroed(
    controls: Sequence[int], a: int, t: int, options: SynthOptions = DEFAULT_OPTIONS
) -> Circuit:
    """Return C^n(X) on the a=|0> subspace, returning a to |0>."""
    check_distinct(controls, a, t)
    gate = MacroGate(tuple(controls), t, via=via(Method.POLYLOG_ZEROED), ancillae=(a,))
    return lower_gate(gate, options)


@register(Method.MCU_ZEROED)
def plan_mcu_one_zeroed(gate: MacroGate, options: SynthOptions) -> list[Stage]:
    """Return compute into the zeroed ancilla, C^1(u) onto the target, uncompute."""
    require_ancillae(gate, 1)
    a = gate.ancillae[0]
    compute = mcx(gate.controls, a, Method.POLYLOG_BORROWED, (gate.target,))
    u = gate.u if gate.u is not None else PAULI_X
    return [(compute,), (MacroGate((a,), gate.target, u=u),), (compute,)]


def synth_mcu_one_zeroed(
    u: OneQubitUnitary,
    controls: Sequence[int],
    a: int,
    t: int,
    options: SynthOptions = DEFAULT_OPTIONS,
) -> Circuit:
    """Return C^n(u) on the a=|0> subspace."""
    check_distinct(controls, a, t)
    gate = MacroGate(tuple(controls), t, u=u, via=via(Method.MCU_ZEROED), ancillae=(a,))
    return lower_gate(gate, options)


def _pieces(item: Instruction) -> tuple[Sequence[int], ...]:
    if isinstance(item, MacroGate):
        return (item.controls, item.ancillae, (item.target,))
    return (item.wires,)


def _stage_support(stage: Stage) -> list[tuple[int, int]]:
    """Return the wires a stage touches as sorted half-open intervals."""
    spans: list[tuple[int, int]] = []
    for item in stage:
        for piece in _pieces(item):
            if isinstance(piece, range) and piece.step == 1:
                if piece:
                    spans.append((piece.start, piece.stop))
            else:
                spans.extend((w, w + 1) for w in piece)
    spans.sort()
    merged: list[tuple[int, int]] = []
    for start, stop in spans:
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], stop))
        else:
            merged.append((start, stop))
    return merged


def _overlaps(left: list[tuple[int, int]], right: list[tuple[int, int]]) -> bool:
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i][1] <= right[j][0]:
            i += 1
        elif right[j][1] <= left[i][0]:
            j += 1
        else:
            return True
    return False


def _self_inverse(item: Instruction) -> bool:
    if isinstance(item, MacroGate):
        return item.u is None
    if isinstance(item, SingleQubit):
        return item.u == PAULI_X
    return isinstance(item, ControlledNot)


def cancel_inverse_stages(stages: Sequence[Stage]) -> list[Stage]:
    """Drop pairs of identical self-inverse stages separated only by disjoint stages."""
    kept: list[tuple[Stage, list[tuple[int, int]]]] = []
    cancelled = 0
    for stage in stages:
        support = _stage_support(stage)
        for index in range(len(kept) - 1, -1, -1):
            earlier, earlier_support = kept[index]
            if not _overlaps(earlier_support, support):
                continue
            if earlier == stage and all(_self_inverse(item) for item in stage):
                del kept[index]
                cancelled += 1
                break
            kept.append((stage, support))
            break
        else:
            kept.append((stage, support))
    if cancelled:
        _LOGGER.debug("Cancelled %s inverse stage pairs", cancelled)
    return [stage for stage, _ in kept]


@register(Method.MC_SU2)
def plan_mc_su2(gate: MacroGate, options: SynthOptions) -> list[Stage]:
    """Return the peeled-control form C'(q_n), MCX, B'(q_n), MCX, A'(q_n)."""
    if gate.u is None:
        raise SynthesisError("mc-su2 needs a special unitary payload")
    abc = abc_decompose(gate.u)
    rest, peeled, t = gate.controls[:-1], gate.controls[-1], gate.target

    def singly(u: OneQubitUnitary) -> Stage:
        return (MacroGate((peeled,), t, u=u),)

    if options.conjugate_ordering and len(rest) > options.threshold:
        first = borrowed_stages(rest, peeled, t, options)
        stages = [singly(abc.c), *first, singly(abc.b), *reversed(first), singly(abc.a)]
        return cancel_inverse_stages(stages)
    inner = (mcx(rest, t, Method.POLYLOG_BORROWED, (peeled,)),)
    return [singly(abc.c), inner, singly(abc.b), inner, singly(abc.a)]


def synth_mc_su2(
    w: OneQubitUnitary,
    controls: Sequence[int],
    t: int,
    options: SynthOptions = DEFAULT_OPTIONS,
) -> Circuit:
    """Return C^n(w) for special unitary w without ancillae."""
    if len(controls) < 2:
        raise SynthesisError(f"mc-su2 needs at least 2 controls, got {len(controls)}")
    check_distinct(controls, t)
    abc_decompose(w)
    gate = MacroGate(tuple(controls), t, u=w, via=via(Method.MC_SU2))
    return lower_gate(gate, options)
