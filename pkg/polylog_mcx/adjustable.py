"""Exact C^n(X) with m zeroed ancillae: parallel block compression around a log-depth core."""

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
import logging

from .baselines import mcx
from .circuit import (
    Circuit,
    ControlledNot,
    Instruction,
    MacroGate,
    MethodId,
    ResourceProfile,
    SynthesisError,
)
from .const import Method
from .engine import DEFAULT_OPTIONS, Stage, SynthOptions, check_distinct, lower_gate, register
from .estimator import estimate

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class AncillaSplit:
    """A0 receives block activations, A1 serves as scratch for blocks and the core."""

    a0: Sequence[int]
    a1: Sequence[int]
    block_sizes: tuple[int, ...]


def balanced_sizes(n: int, k: int) -> tuple[int, ...]:
    """Return k sizes summing to n that differ by at most one, larger first."""
    q, extra = divmod(n, k)
    return (q + 1,) * extra + (q,) * (k - extra)


def split_ancillae(n: int, ancillae: Sequence[int]) -> AncillaSplit:
    """Return the ancilla split for n controls."""
    m = len(ancillae)
    if not 2 <= m <= n:
        raise SynthesisError(f"adjustable needs 2 <= m <= n, got m={m}, n={n}")
    k = m // 2
    return AncillaSplit(ancillae[:k], ancillae[k:], balanced_sizes(n, k))


def _blocks(controls: Sequence[int], sizes: Sequence[int]) -> list[Sequence[int]]:
    blocks, start = [], 0
    for size in sizes:
        blocks.append(controls[start : start + size])
        start += size
    return blocks


def _compression(controls: Sequence[int], split: AncillaSplit) -> Stage:
    blocks = _blocks(controls, split.block_sizes)
    return tuple(
        mcx(block, split.a0[i], Method.POLYLOG_ZEROED, (split.a1[i],))
        for i, block in enumerate(blocks)
    )


def _core(split: AncillaSplit, target: int) -> Instruction:
    k = len(split.a0)
    if k == 1:
        return ControlledNot(split.a0[0], target)
    assert len(split.a1) >= k - 1
    return mcx(split.a0, target, Method.LOG_TREE, split.a1[: k - 1])


def _adjustable_cost(gate: MacroGate, options: SynthOptions, profile_of) -> ResourceProfile:
    split = split_ancillae(len(gate.controls), gate.ancillae)
    compression = ResourceProfile()
    for size, copies in Counter(split.block_sizes).items():
        block = mcx(range(size), size, Method.POLYLOG_ZEROED, (size + 1,))
        compression = compression.beside(profile_of(block).stacked(copies))
    return compression.then(profile_of(_core(split, gate.target))).then(compression)


@register(Method.ADJUSTABLE, cost=_adjustable_cost)
def plan_mcx_adjustable(gate: MacroGate, options: SynthOptions) -> list[Stage]:
    """Return compression into A0, the core MCX(A0 -> t), and the uncompression."""
    split = split_ancillae(len(gate.controls), gate.ancillae)
    compression = _compression(gate.controls, split)
    return [compression, (_core(split, gate.target),), compression]


def synth_mcx_adjustable(
    controls: Sequence[int],
    zeroed: Sequence[int],
    target: int,
    options: SynthOptions = DEFAULT_OPTIONS,
) -> Circuit:
    """Return C^n(X) using 2 <= m <= n zeroed ancillae."""
    check_distinct(controls, zeroed, target)
    method = MethodId(Method.ADJUSTABLE, m=len(zeroed))
    gate = MacroGate(tuple(controls), target, via=method, ancillae=tuple(zeroed))
    split_ancillae(len(controls), gate.ancillae)
    return lower_gate(gate, options)


def adjustable_depth_estimate(
    n: int, m: int, options: SynthOptions = DEFAULT_OPTIONS
) -> ResourceProfile:
    """Return the estimated resources of the adjustable construction."""
    return estimate(MethodId(Method.ADJUSTABLE, m=m), n, options=options)
