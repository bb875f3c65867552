"""Tests for resource estimation, consistency checks, sweeps and fits."""

import io
import math

import pytest

from polylog_mcx.circuit import MethodId
from polylog_mcx.const import CSV_HEADER, DEFAULT_THRESHOLD, LITERATURE_ROWS, Method
from polylog_mcx.engine import SynthOptions
from polylog_mcx.estimator import (
    EstimationError,
    ResourceEstimator,
    compare,
    consistency_check,
    estimate,
    fit_depth,
    literature_table,
    log_spaced,
    sweep,
    write_csv,
)
from polylog_mcx.gates import SX


SIZE_RATIO_BOUND = 2.0


def _method(name: str, **params) -> MethodId:
    return MethodId(Method(name), **params)


def test_single_control_is_one_cnot():
    profile = estimate(_method("polylog-borrowed"), 1)
    assert profile.gate_key == (1, 1, 0)
    assert profile.borrowed_ancillae_used == 1


def test_ancilla_accounting():
    assert estimate(_method("polylog-zeroed"), 50).zeroed_ancillae_used == 1
    assert estimate(_method("ladder"), 50).borrowed_ancillae_used == 48
    assert estimate(_method("log-tree"), 50).zeroed_ancillae_used == 49
    adjustable = estimate(_method("adjustable", m=16), 50)
    assert (adjustable.zeroed_ancillae_used, adjustable.borrowed_ancillae_used) == (16, 0)
    assert estimate(_method("mc-su2"), 50).borrowed_ancillae_used == 0


def test_estimate_rejections():
    with pytest.raises(EstimationError):
        estimate(_method("polylog-borrowed"), 0)
    with pytest.raises(EstimationError):
        estimate(_method("split"), 2)
    with pytest.raises(EstimationError):
        estimate(_method("adjustable", m=64), 10)


@pytest.mark.parametrize(
    ("method", "n_max", "points"),
    [
        (_method("polylog-borrowed"), 2048, 5),
        (_method("ladder"), 2048, 4),
        (_method("split"), 2048, 4),
        (_method("log-tree"), 2048, 4),
        (_method("polylog-zeroed"), 512, 5),
        (_method("mcu-zeroed"), 256, 4),
        (_method("mc-su2"), 256, 5),
        (_method("approx", epsilon=0.1), 256, 4),
        (_method("adjustable", m=4), 512, 4),
        (_method("adjustable", m=16), 256, 3),
    ],
)
def test_estimates_match_lowering(method, n_max, points):
    report = consistency_check(method, n_max, points=points)
    assert report.passed, report.to_dict()
    assert report.divergence is None


def test_estimates_match_lowering_with_small_threshold(small_options):
    for method in (_method("polylog-borrowed"), _method("mc-su2"), _method("approx", epsilon=1e-3)):
        assert consistency_check(method, 200, small_options, points=4).passed


def test_estimate_with_unitary_payload():
    report = consistency_check(_method("mcu-zeroed"), 100, points=3, u=SX)
    assert report.passed


def test_estimator_memoizes_shapes():
    estimator = ResourceEstimator(SynthOptions())
    estimator.estimate(_method("polylog-borrowed"), 5000)
    shapes = len(estimator.profiles)
    estimator.estimate(_method("polylog-borrowed"), 5000)
    assert len(estimator.profiles) == shapes


def test_log_spaced():
    grid = log_spaced(100, 10_000_000, 25)
    assert grid[0] == 100 and grid[-1] == 10_000_000
    assert grid == sorted(set(grid))
    assert log_spaced(3, 3, 5) == [3]
    assert log_spaced(7, 9, 1) == [7]
    with pytest.raises(EstimationError):
        log_spaced(10, 5, 3)


def test_polylog_scaling_fit():
    rows = sweep([Method.POLYLOG_BORROWED], log_spaced(100, 1_000_000, 25))
    fit = fit_depth(rows, "linear-in-log3n")
    assert fit.r_squared >= 0.99
    assert 15 <= fit.slope <= 90


@pytest.mark.parametrize(("method", "literature_slope"), [(Method.SPLIT, 48), (Method.LADDER, 24)])
def test_linear_baselines_fit(method, literature_slope):
    rows = sweep([method], log_spaced(100, 1_000_000, 20))
    fit = fit_depth(rows, "linear-in-n")
    assert fit.r_squared >= 0.999
    assert literature_slope / 2 <= fit.slope <= literature_slope * 2


def test_fit_recovers_cubic():
    rows = [{"n": n, "depth": 3 * math.log2(n) ** 3 + 7} for n in (8, 64, 512, 4096)]
    fit = fit_depth(rows)
    assert fit.slope == pytest.approx(3)
    assert fit.intercept == pytest.approx(7)
    assert fit.r_squared == pytest.approx(1)


def test_fit_adjustable_shape():
    n = 1_000_000
    # every compression block keeps at least 2 * threshold controls
    m_grid = tuple(log_spaced(2, n // DEFAULT_THRESHOLD, 30))
    rows = sweep([Method.ADJUSTABLE], [n], m_grid=m_grid)
    fit = fit_depth(rows, "adjustable-shape")
    assert len(fit.coefficients) == 3
    assert fit.r_squared >= 0.98
    for row in rows:
        assert abs(fit.predict(row) - row["depth"]) <= 0.1 * row["depth"], row


def test_fit_rejections():
    with pytest.raises(EstimationError):
        fit_depth([{"n": 8, "depth": 1}] * 2)
    with pytest.raises(EstimationError):
        fit_depth([{"n": 8, "depth": d} for d in (1, 2, 3)])
    with pytest.raises(EstimationError):
        fit_depth([{"n": 8, "depth": 1}] * 3, "quadratic")


def test_size_bound():
    ratios = []
    for n in log_spaced(100, 1_000_000, 12):
        size = estimate(_method("polylog-borrowed"), n).size
        ratios.append(size / (n * math.log2(n) ** 4))
    assert max(ratios) <= SIZE_RATIO_BOUND
    assert ratios[-1] <= ratios[0]


def test_crossover():
    for n in log_spaced(512, 10**6, 30):
        polylog = estimate(_method("polylog-borrowed"), n).depth
        assert polylog < estimate(_method("split"), n).depth
        assert polylog < estimate(_method("ladder"), n).depth


def test_sweep_rows_and_csv():
    rows = sweep(
        [Method.POLYLOG_BORROWED, Method.ADJUSTABLE, Method.APPROX],
        [8, 1000],
        m_grid=(2, 16),
        epsilon_grid=(0.1,),
    )
    methods = [(row["method"], row["n"], row["m"]) for row in rows]
    assert ("adjustable", 8, 16) not in methods
    assert ("adjustable", 1000, 16) in methods
    stream = io.StringIO()
    write_csv(rows, stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == len(rows) + 1
    assert lines[1].startswith("polylog-borrowed,8,,,")


def test_sweep_needs_grids():
    with pytest.raises(EstimationError):
        sweep([Method.ADJUSTABLE], [100])
    with pytest.raises(EstimationError):
        sweep([Method.APPROX], [100])
    with pytest.raises(EstimationError):
        sweep([], [100])


def test_literature_rows():
    rows = literature_table()
    assert len(rows) == len(LITERATURE_ROWS) == 13
    assert len({row.key for row in rows}) == 13
    table = compare(1000, m=64)
    assert {entry["key"] for entry in table["literature"]} == {row.key for row in rows}
    gidney = next(e for e in table["literature"] if e["key"] == "gidney")
    assert gidney["depth"] == 494 * 1000 - 1413
    assert gidney["epsilon"] is None
    approx = next(e for e in table["literature"] if e["key"] == "approx-polylog")
    assert approx["epsilon"] == 1e-7
    assert all(entry["source"].startswith("literature") for entry in table["literature"])


def test_compare_without_ancilla_count():
    table = compare(1000)
    assert "adjustable" not in {row["method"] for row in table["methods"]}
    adjustable = next(e for e in table["literature"] if e["key"] == "adjustable")
    assert adjustable["depth"] is None
