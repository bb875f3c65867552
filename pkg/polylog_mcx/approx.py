"""Ancilla-free approximate C^n(U) by peeling principal roots and truncating."""

from collections.abc import Sequence
from dataclasses import dataclass
import logging
import math

from .baselines import mcx
from .circuit import PAULI_X, Circuit, MacroGate, MethodId, OneQubitUnitary, SynthesisError
from .const import Method
from .engine import DEFAULT_OPTIONS, Stage, SynthOptions, check_distinct, lower_gate, register
from .gates import principal_root

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ApproxPlan:
    """Peel count, the roots V_1..V_k, and the dropped-term error bound."""

    k: int
    roots: tuple[OneQubitUnitary, ...]
    truncation_bound: float
    exact: bool


def truncation_error_bound(k: int) -> float:
    """Return pi / 2^k."""
    if k < 1:
        raise SynthesisError(f"peel count must be at least 1, got {k}")
    return math.pi / 2**k


def peel_count(n: int, epsilon: float) -> int:
    """Return k = ceil(log2(pi/epsilon)) clamped to [1, n-1]."""
    k = math.ceil(math.log2(math.pi / epsilon))
    return min(n - 1, max(1, k))


def plan_approx(n: int, epsilon: float, u: OneQubitUnitary = PAULI_X) -> ApproxPlan:
    """Return the approximation plan for C^n(u) to spectral error epsilon."""
    if n < 2:
        raise SynthesisError(f"approximation needs at least 2 controls, got {n}")
    if not epsilon > 0:
        raise SynthesisError(f"epsilon must be positive, got {epsilon}")
    k = peel_count(n, epsilon)
    exact = k == n - 1
    plan = ApproxPlan(
        k=k,
        roots=tuple(principal_root(u, j) for j in range(1, k + 1)),
        truncation_bound=0.0 if exact else truncation_error_bound(k),
        exact=exact,
    )
    _LOGGER.debug("Approximation plan for n=%s eps=%s: k=%s exact=%s", n, epsilon, k, exact)
    return plan


def peel_stages(root: OneQubitUnitary, controls: Sequence[int], target: int) -> list[Stage]:
    """Return the four stages removing the last control, leaving C^{n-1}(root) undone."""
    peeled, remaining = controls[-1], controls[:-1]
    flip = mcx(remaining, peeled, Method.POLYLOG_BORROWED, (target,))
    return [
        (flip,),
        (MacroGate((peeled,), target, u=root.dagger()),),
        (flip,),
        (MacroGate((peeled,), target, u=root),),
    ]


def peel_identity(u: OneQubitUnitary, controls: Sequence[int], target: int) -> Circuit:
    """Return the macro-tier five-gate identity for C^n(u) with its residual kept."""
    root = principal_root(u, 1)
    stages = peel_stages(root, controls, target)
    stages.append((MacroGate(controls[:-1], target, u=root),))
    gates = tuple(item for stage in stages for item in stage)
    return Circuit(max(*controls, target) + 1, gates)


@register(Method.APPROX)
def plan_mcu_approx(gate: MacroGate, options: SynthOptions) -> list[Stage]:
    """Return k peel levels, plus the final singly controlled root when exact."""
    n = len(gate.controls)
    u = gate.u if gate.u is not None else PAULI_X
    plan = plan_approx(n, gate.via.epsilon, u)
    stages: list[Stage] = []
    for j, root in enumerate(plan.roots, 1):
        stages.extend(peel_stages(root, gate.controls[: n - j + 1], gate.target))
    if plan.exact:
        stages.append((MacroGate((gate.controls[0],), gate.target, u=plan.roots[-1]),))
    return stages


def synth_mcu_approx(
    u: OneQubitUnitary,
    controls: Sequence[int],
    target: int,
    epsilon: float,
    options: SynthOptions = DEFAULT_OPTIONS,
) -> Circuit:
    """Return C^n(u) within spectral error epsilon using no ancillae."""
    check_distinct(controls, target)
    method = MethodId(Method.APPROX, epsilon=epsilon)
    gate = MacroGate(tuple(controls), target, u=u, via=method)
    return lower_gate(gate, options)
