"""Tests for the lowering engine."""

import numpy as np
import pytest

from polylog_mcx.circuit import (
    Barrier,
    Circuit,
    ControlledNot,
    MacroGate,
    MethodId,
    Role,
    SynthesisError,
    gate_counts,
)
from polylog_mcx.const import DEFAULT_THRESHOLD, Method
from polylog_mcx.engine import (
    SynthOptions,
    ancilla_count,
    build_gate,
    canonical_shape,
    gate_roles,
    is_leaf,
    iter_lowered,
    lower,
    lower_gate,
    minimum_controls,
    plan_stages,
    via,
)
from polylog_mcx.estimator import measure
from polylog_mcx.gates import TOFFOLI_DEPTH, H, X, toffoli_network
from polylog_mcx.verifier import IdealSpec, circuit_unitary, verify_exact


def test_options_threshold_floor():
    assert SynthOptions().threshold == DEFAULT_THRESHOLD
    with pytest.raises(SynthesisError):
        SynthOptions(threshold=3)


def test_leaves():
    assert is_leaf(MacroGate((0,), 1))
    assert is_leaf(MacroGate((0, 1), 2))
    assert is_leaf(MacroGate((0,), 1, u=H))
    assert not is_leaf(MacroGate((0, 1), 2, u=H, via=via(Method.MC_SU2)))
    assert not is_leaf(MacroGate((0, 1, 2), 3, via=via(Method.LADDER), ancillae=(4,)))
    assert lower_gate(MacroGate((3,), 0)).gates == (ControlledNot(3, 0),)
    assert lower_gate(MacroGate((0, 1), 2)).gates == toffoli_network(0, 1, 2)


def test_canonical_shape_relabels():
    gate = MacroGate((7, 2, 9), 4, white=frozenset({2}), via=via(Method.SPLIT), ancillae=(5,))
    shape = canonical_shape(gate)
    assert tuple(shape.controls) == (0, 1, 2)
    assert tuple(shape.ancillae) == (3,)
    assert shape.target == 4
    assert shape.white == frozenset()
    assert shape.via == gate.via


def test_lowering_remaps_templates():
    gate = MacroGate((7, 2, 9), 4, via=via(Method.SPLIT), ancillae=(5,))
    c = lower_gate(gate)
    assert c.width == 10
    assert c.is_lowered
    used = {w for g in c.gates for w in g.wires}
    assert used <= {7, 2, 9, 4, 5}
    assert verify_exact(c, IdealSpec.for_gate(gate)).passed


def test_white_controls_add_two_layers():
    black = MacroGate((0, 1, 2), 3, via=via(Method.SPLIT), ancillae=(4,))
    white = MacroGate((0, 1, 2), 3, white=frozenset({0, 2}), via=black.via, ancillae=(4,))
    assert measure(white).depth == measure(black).depth + 2
    assert verify_exact(lower_gate(white), IdealSpec.for_gate(white)).passed


def test_white_single_control_cnot():
    gate = MacroGate((0,), 1, white=frozenset({0}))
    expected = np.eye(4)[:, [1, 0, 2, 3]]
    assert np.allclose(circuit_unitary(lower_gate(gate)), expected)


def test_iter_lowered_matches_lower_gate():
    gate = build_gate(MethodId(Method.POLYLOG_BORROWED), 40)
    assert tuple(iter_lowered(gate)) == lower_gate(gate).gates


def test_lower_keeps_basis_gates_and_phase():
    macro = MacroGate((0, 1), 2)
    c = Circuit(3, (ControlledNot(0, 1), macro, Barrier((0, 1, 2))), global_phase=0.2)
    lowered = lower(c)
    assert lowered.is_lowered
    assert lowered.global_phase == 0.2
    assert gate_counts(lowered) == (7, 9)


def test_plan_stages_are_disjoint():
    gate = build_gate(MethodId(Method.POLYLOG_BORROWED), 200)
    for stage in plan_stages(gate):
        wires = [w for item in stage for w in item.wires]
        assert len(wires) == len(set(wires))


def test_gate_roles():
    gate = build_gate(MethodId(Method.POLYLOG_ZEROED), 5)
    assert gate_roles(gate, 7) == (Role.CONTROL,) * 5 + (Role.ZEROED, Role.TARGET)
    gate = build_gate(MethodId(Method.LADDER), 4)
    roles = lower_gate(gate).roles
    assert roles.count(Role.BORROWED) == 2


def test_build_gate_shapes():
    gate = build_gate(MethodId(Method.ADJUSTABLE, m=3), 6)
    assert tuple(gate.ancillae) == (6, 7, 8)
    assert gate.target == 9
    assert gate.u is None
    assert ancilla_count(MethodId(Method.LOG_TREE), 6) == 5
    assert ancilla_count(MethodId(Method.MC_SU2), 6) == 0


def test_build_gate_default_unitaries():
    su2 = build_gate(MethodId(Method.MC_SU2), 4)
    assert abs(su2.u.det - 1) < 1e-12
    approx = build_gate(MethodId(Method.APPROX, epsilon=0.1), 4)
    assert approx.u.is_close(X)
    assert build_gate(MethodId(Method.MCU_ZEROED), 4, H).u == H


def test_build_gate_rejections():
    with pytest.raises(SynthesisError):
        build_gate(MethodId(Method.LADDER), 2)
    with pytest.raises(SynthesisError):
        build_gate(MethodId(Method.SPLIT), 5, H)
    with pytest.raises(SynthesisError):
        build_gate(MethodId(Method.ADJUSTABLE, m=8), 6)
    assert minimum_controls(MethodId(Method.ADJUSTABLE, m=8)) == 8
    assert build_gate(MethodId(Method.SPLIT), 5, X).u is None


def test_unregistered_gate_rejected():
    with pytest.raises(SynthesisError):
        plan_stages(MacroGate((0, 1, 2), 3))


def test_toffoli_leaf_depth():
    assert measure(MacroGate((0, 1), 2)).depth == TOFFOLI_DEPTH
