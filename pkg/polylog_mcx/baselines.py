"""Linear-depth and tree-shaped MCX constructions used as base cases and baselines."""

from collections.abc import Sequence
import logging
import math

from .circuit import Circuit, ControlledNot, MacroGate, ResourceProfile, SynthesisError
from .const import Method
from .engine import (
    DEFAULT_OPTIONS,
    Stage,
    SynthOptions,
    check_distinct,
    lower_gate,
    register,
    require_ancillae,
    via,
)

_LOGGER = logging.getLogger(__name__)

_TOFFOLI = MacroGate((0, 1), 2)


def toffoli(c1: int, c2: int, target: int) -> MacroGate:
    """Return a black two-control NOT, lowered as the Toffoli network."""
    return MacroGate((c1, c2), target)


def mcx(
    controls: Sequence[int], target: int, method: Method, ancillae: Sequence[int] = ()
) -> MacroGate:
    """Return an MCX lowered via method; one and two controls ignore the ancillae."""
    if len(controls) <= 2:
        return MacroGate(controls, target)
    return MacroGate(controls, target, via=via(method), ancillae=ancillae)


def _repeat(profile: ResourceProfile, times: int) -> ResourceProfile:
    return ResourceProfile(
        profile.depth * times,
        profile.cnot_count * times,
        profile.single_qubit_count * times,
    )


def _ladder_cost(gate: MacroGate, options: SynthOptions, profile_of) -> ResourceProfile:
    return _repeat(profile_of(_TOFFOLI), 4 * (len(gate.controls) - 2))


@register(Method.LADDER, cost=_ladder_cost)
def plan_ladder(gate: MacroGate, options: SynthOptions) -> list[Stage]:
    """Return the Toffoli chain on n-2 borrowed ancillae, one Toffoli per stage."""
    n = len(gate.controls)
    if n < 3:
        raise SynthesisError(f"ladder needs at least 3 controls, got {n}")
    require_ancillae(gate, n - 2)
    # 1-based views: c[1..n], a[1..n-2]
    c = (None, *gate.controls)
    a = (None, *gate.ancillae)
    chain = [toffoli(c[n], a[n - 2], gate.target)]
    chain += [toffoli(c[n - j], a[n - 2 - j], a[n - 1 - j]) for j in range(1, n - 2)]
    half = chain + [toffoli(c[1], c[2], a[1])] + chain[:0:-1]
    return [(tof,) for tof in half + half]


def synth_ladder(
    controls: Sequence[int],
    borrowed: Sequence[int],
    target: int,
    options: SynthOptions = DEFAULT_OPTIONS,
) -> Circuit:
    """Return C^n(X) restoring n-2 borrowed ancillae."""
    check_distinct(controls, borrowed, target)
    gate = MacroGate(tuple(controls), target, via=via(Method.LADDER), ancillae=tuple(borrowed))
    return lower_gate(gate, options)


@register(Method.SPLIT)
def plan_split(gate: MacroGate, options: SynthOptions) -> list[Stage]:
    """Return A, B, A, B with two half-sized ladders sharing one borrowed ancilla."""
    n = len(gate.controls)
    if n < 3:
        raise SynthesisError(f"split needs at least 3 controls, got {n}")
    require_ancillae(gate, 1)
    ancilla = gate.ancillae[0]
    n1 = math.ceil(n / 2)
    first, second = gate.controls[:n1], tuple(gate.controls[n1:])
    n2 = len(second)
    a_gate = mcx(first, ancilla, Method.LADDER, (*second, gate.target)[: n1 - 2])
    b_gate = mcx((*second, ancilla), gate.target, Method.LADDER, first[: n2 - 1])
    return [(a_gate,), (b_gate,), (a_gate,), (b_gate,)]


def synth_split(
    controls: Sequence[int],
    borrowed: int,
    target: int,
    options: SynthOptions = DEFAULT_OPTIONS,
) -> Circuit:
    """Return C^n(X) restoring a single borrowed ancilla."""
    check_distinct(controls, borrowed, target)
    gate = MacroGate(tuple(controls), target, via=via(Method.SPLIT), ancillae=(borrowed,))
    return lower_gate(gate, options)


def _log_tree_cost(gate: MacroGate, options: SynthOptions, profile_of) -> ResourceProfile:
    n = len(gate.controls)
    tof = _repeat(profile_of(_TOFFOLI), 2 * (n - 1))
    levels = (n - 1).bit_length()
    return ResourceProfile(
        2 * levels * profile_of(_TOFFOLI).depth + 1,
        tof.cnot_count + 1,
        tof.single_qubit_count,
    )


@register(Method.LOG_TREE, cost=_log_tree_cost)
def plan_log_tree(gate: MacroGate, options: SynthOptions) -> list[Stage]:
    """Return a pairwise AND tree into zeroed ancillae, a CNOT, and its uncompute."""
    n = len(gate.controls)
    if n < 2:
        raise SynthesisError(f"log tree needs at least 2 controls, got {n}")
    require_ancillae(gate, n - 1, at_least=True)
    spare = iter(gate.ancillae)
    level = list(gate.controls)
    compute: list[Stage] = []
    while len(level) > 1:
        stage, carried = [], []
        for left, right in zip(level[0::2], level[1::2]):
            into = next(spare)
            stage.append(toffoli(left, right, into))
            carried.append(into)
        if len(level) % 2:
            carried.append(level[-1])
        compute.append(tuple(stage))
        level = carried
    return [*compute, (ControlledNot(level[0], gate.target),), *reversed(compute)]


def synth_log_tree(
    controls: Sequence[int],
    zeroed: Sequence[int],
    target: int,
    options: SynthOptions = DEFAULT_OPTIONS,
) -> Circuit:
    """Return C^n(X) in logarithmic depth using n-1 zeroed ancillae."""
    check_distinct(controls, zeroed, target)
    if len(zeroed) < len(controls) - 1:
        raise SynthesisError(
            f"log tree needs {len(controls) - 1} zeroed ancillae, got {len(zeroed)}"
        )
    used = tuple(zeroed[: len(controls) - 1])
    gate = MacroGate(tuple(controls), target, via=via(Method.LOG_TREE), ancillae=used)
    return lower_gate(gate, options, width=max(*controls, *zeroed, target) + 1)


@register(Method.BASE)
def plan_base(gate: MacroGate, options: SynthOptions) -> list[Stage]:
    """Return the base-case stages for 3 <= n <= threshold."""
    n = len(gate.controls)
    if n > options.threshold:
        raise SynthesisError(f"base case covers at most {options.threshold} controls, got {n}")
    return plan_split(gate, options)


def base_case_mcx(
    controls: Sequence[int],
    borrowed: int,
    target: int,
    options: SynthOptions = DEFAULT_OPTIONS,
) -> Circuit:
    """Return the base-case circuit: CNOT, Toffoli, or the split construction."""
    n = len(controls)
    if not 1 <= n <= options.threshold:
        raise SynthesisError(f"base case covers 1..{options.threshold} controls, got {n}")
    check_distinct(controls, borrowed, target)
    gate = MacroGate(tuple(controls), target, via=via(Method.BASE), ancillae=(borrowed,))
    return lower_gate(gate, options)


def base_case_table(options: SynthOptions = DEFAULT_OPTIONS) -> dict[int, Circuit]:
    """Return the memoized base-case templates on wires controls, ancilla, target."""
    table = {}
    for n in range(1, options.threshold + 1):
        table[n] = base_case_mcx(range(n), n, n + 1, options)
    _LOGGER.debug("Built base case table up to %s controls", options.threshold)
    return table
