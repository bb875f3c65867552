"""Tests for the ancilla-free approximate multi-controlled unitary."""

import math

import pytest
from scipy.stats import unitary_group

from polylog_mcx.approx import (
    peel_count,
    peel_identity,
    plan_approx,
    synth_mcu_approx,
    truncation_error_bound,
)
from polylog_mcx.circuit import MacroGate, MethodId, OneQubitUnitary, SynthesisError
from polylog_mcx.const import Method
from polylog_mcx.engine import build_gate, plan_stages
from polylog_mcx.estimator import estimate
from polylog_mcx.gates import SX, H, X
from polylog_mcx.verifier import (
    IdealSpec,
    dense_spectral_error,
    spectral_error,
    verify_exact,
)


def _random_unitary(seed: int) -> OneQubitUnitary:
    return OneQubitUnitary.from_matrix(unitary_group.rvs(2, random_state=seed))


def test_plan_known_values():
    plan = plan_approx(10, 0.1)
    assert plan.k == 5
    assert not plan.exact
    assert plan.truncation_bound == pytest.approx(math.pi / 32)
    exact = plan_approx(4, 1e-9)
    assert exact.k == 3
    assert exact.exact
    assert exact.truncation_bound == 0.0


def test_plan_roots_are_principal_chain():
    plan = plan_approx(12, 1e-3, H)
    assert (plan.roots[1] @ plan.roots[1]).is_close(plan.roots[0], 1e-10)
    assert (plan.roots[0] @ plan.roots[0]).is_close(H, 1e-10)


@pytest.mark.parametrize(
    ("k", "bound"), [(1, math.pi / 2), (5, 0.0981747704), (20, 2.996056e-6)]
)
def test_truncation_bounds(k, bound):
    assert truncation_error_bound(k) == pytest.approx(bound, rel=1e-6)


def test_peel_count_clamps():
    assert peel_count(1000, 3.0) == 1
    assert peel_count(1000, 10.0) == 1
    assert peel_count(5, 1e-12) == 4
    assert peel_count(10**6, 1e-7) == 25


def test_plan_rejections():
    with pytest.raises(SynthesisError):
        plan_approx(1, 0.1)
    with pytest.raises(SynthesisError):
        plan_approx(5, 0.0)
    with pytest.raises(SynthesisError):
        truncation_error_bound(0)


@pytest.mark.parametrize("u", [X, SX, H])
def test_peel_identity_is_exact(u):
    n = 4
    c = peel_identity(u, tuple(range(n)), n)
    assert c.width == n + 1
    assert len(c.gates) == 5
    report = verify_exact(c, IdealSpec(tuple(range(n)), n, u=u))
    assert report.passed
    assert abs(report.global_phase - 1) < 1e-9


@pytest.mark.parametrize("n", range(4, 9))
@pytest.mark.parametrize("epsilon", [0.3, 0.05, 1e-3])
def test_spectral_error_within_budget(n, epsilon):
    c = synth_mcu_approx(X, range(n), n, epsilon)
    assert c.width == n + 1
    plan = plan_approx(n, epsilon)
    error = spectral_error(c, IdealSpec(tuple(range(n)), n, u=X))
    assert error.value <= min(epsilon, math.pi / 2**plan.k) + 1e-8


@pytest.mark.parametrize("seed", [3, 11])
def test_spectral_error_random_unitary(seed):
    u = _random_unitary(seed)
    n, epsilon = 8, 0.05
    c = synth_mcu_approx(u, range(n), n, epsilon)
    error = spectral_error(c, IdealSpec(tuple(range(n)), n, u=u))
    assert error.value <= epsilon + 1e-8


def test_truncated_circuit_has_visible_error():
    n, epsilon = 6, 0.3
    plan = plan_approx(n, epsilon)
    assert plan.k == 4 and not plan.exact
    c = synth_mcu_approx(X, range(n), n, epsilon)
    spec = IdealSpec(tuple(range(n)), n, u=X)
    error = spectral_error(c, spec)
    assert 0 < error.value <= epsilon
    assert error.value == pytest.approx(dense_spectral_error(c, spec), rel=1e-3)
    assert not verify_exact(c, spec).passed


def test_single_peel_error():
    c = synth_mcu_approx(X, range(5), 5, 3.0)
    error = spectral_error(c, IdealSpec(tuple(range(5)), 5, u=X))
    assert 0 < error.value <= math.pi / 2 + 1e-8


def test_exact_when_all_controls_peeled():
    n = 5
    c = synth_mcu_approx(X, range(n), n, 0.3)
    spec = IdealSpec(tuple(range(n)), n, u=X)
    assert verify_exact(c, spec).passed
    assert spectral_error(c, spec).value <= 1e-8


@pytest.mark.parametrize(("n", "epsilon"), [(10, 0.1), (6, 0.3), (4, 1e-9)])
def test_gate_census(n, epsilon):
    plan = plan_approx(n, epsilon)
    stages = plan_stages(build_gate(MethodId(Method.APPROX, epsilon=epsilon), n))
    items = [item for stage in stages for item in stage]
    assert all(isinstance(item, MacroGate) for item in items)
    roots = [item for item in items if item.u is not None]
    flips = [item for item in items if item.u is None]
    assert len(roots) == 2 * plan.k + (1 if plan.exact else 0)
    assert len(flips) == 2 * plan.k
    assert all(len(item.controls) == 1 for item in roots)


def test_estimated_error_bound():
    profile = estimate(MethodId(Method.APPROX, epsilon=1e-7), 10**6)
    assert profile.error_bound <= 1e-7
    assert profile.zeroed_ancillae_used == profile.borrowed_ancillae_used == 0


def test_depth_proportional_to_peel_count():
    n = 100_000
    ratios = []
    for epsilon in (1e-1, 1e-3, 1e-5, 1e-7):
        method = MethodId(Method.APPROX, epsilon=epsilon)
        ratios.append(estimate(method, n).depth / peel_count(n, epsilon))
    assert max(ratios) <= 1.1 * min(ratios)
