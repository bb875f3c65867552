"""Resource estimation mirroring the lowering engine, sweeps and fits."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
import csv
from dataclasses import dataclass, field
from functools import lru_cache
import logging
import math
from typing import IO

import numpy as np

from .approx import peel_count, truncation_error_bound
from .circuit import (
    Barrier,
    ControlledNot,
    DepthTracker,
    Instruction,
    MacroGate,
    McxError,
    MethodId,
    OneQubitUnitary,
    ResourceProfile,
    SingleQubit,
)
from .const import (
    CSV_HEADER,
    DEFAULT_COMPARE_EPSILON,
    DEFAULT_CONSISTENCY_MAX,
    DEFAULT_CONSISTENCY_POINTS,
    LITERATURE_ROWS,
    PUBLIC_METHODS,
    ZEROED_METHODS,
    LiteratureRow,
    Method,
)
from .engine import (
    DEFAULT_OPTIONS,
    Stage,
    SynthOptions,
    ancilla_count,
    build_gate,
    canonical_shape,
    is_leaf,
    iter_lowered,
    leaf_network,
    minimum_controls,
    plan_stages,
    routine_for,
)

_LOGGER = logging.getLogger(__name__)

FIT_MODELS = ("linear-in-n", "linear-in-log3n", "adjustable-shape")


class EstimationError(McxError):
    """Error to indicate invalid estimation parameters or a degenerate fit."""


_SINGLE = ResourceProfile(1, 0, 1)
_CNOT = ResourceProfile(1, 1, 0)
_EMPTY = ResourceProfile()


class ResourceEstimator:
    """Memoized resource accounting over canonical macro-gate shapes."""

    def __init__(self, options: SynthOptions = DEFAULT_OPTIONS) -> None:
        """Initialize an estimator with an empty memo."""
        self.options = options
        self.profiles: dict[MacroGate, ResourceProfile] = {}

    def item_profile(self, item: Instruction) -> ResourceProfile:
        """Return the profile of one stage item."""
        if isinstance(item, SingleQubit):
            return _SINGLE
        if isinstance(item, ControlledNot):
            return _CNOT
        if isinstance(item, Barrier):
            return _EMPTY
        return self.gate_profile(item)

    def gate_profile(self, gate: MacroGate) -> ResourceProfile:
        """Return the profile of a macro gate, white controls included."""
        if gate.white:
            flips = ResourceProfile(1, 0, len(gate.white))
            if gate.u is None and len(gate.controls) == 1:
                core = _CNOT
            else:
                core = self.gate_profile(gate.black())
            return flips.then(core).then(flips)
        shape = canonical_shape(gate)
        try:
            return self.profiles[shape]
        except KeyError:
            pass
        profile = self._compute(shape)
        self.profiles[shape] = profile
        return profile

    def _compute(self, shape: MacroGate) -> ResourceProfile:
        if is_leaf(shape):
            tracker = DepthTracker(len(shape.controls) + len(shape.ancillae) + 1)
            return tracker.extend(leaf_network(shape)).profile
        _LOGGER.debug(
            "Estimating %s with %s controls, %s ancillae",
            shape.via,
            len(shape.controls),
            len(shape.ancillae),
        )
        routine = routine_for(shape)
        if routine.cost is not None:
            return routine.cost(shape, self.options, self.item_profile)
        return self.stages_profile(plan_stages(shape, self.options))

    def stages_profile(self, stages: Iterable[Stage]) -> ResourceProfile:
        """Return the sum over stages of the deepest item in each."""
        total = _EMPTY
        for stage in stages:
            layer = _EMPTY
            for item in stage:
                layer = layer.beside(self.item_profile(item))
            total = total.then(layer)
        return total

    def estimate(
        self, method: MethodId, n: int, u: OneQubitUnitary | None = None
    ) -> ResourceProfile:
        """Return depth, counts, ancilla usage and error bound of method on n controls."""
        if n < 1:
            raise EstimationError(f"control count must be positive, got {n}")
        try:
            gate = build_gate(method, n, u)
        except McxError as err:
            raise EstimationError(str(err)) from err
        profile = self.gate_profile(gate)
        k = ancilla_count(method, n)
        zeroed = k if method.method in ZEROED_METHODS else 0
        error_bound = 0.0
        if method.method is Method.APPROX:
            peels = peel_count(n, method.epsilon)
            error_bound = 0.0 if peels == n - 1 else truncation_error_bound(peels)
        return ResourceProfile(
            profile.depth,
            profile.cnot_count,
            profile.single_qubit_count,
            zeroed_ancillae_used=zeroed,
            borrowed_ancillae_used=k - zeroed,
            error_bound=error_bound,
        )

    def first_divergence(self, gate: MacroGate) -> MacroGate | None:
        """Return the smallest shape whose estimate differs from its lowering."""
        return self._diverging(canonical_shape(gate.black()), set())

    def _diverging(self, shape: MacroGate, seen: set[MacroGate]) -> MacroGate | None:
        if shape in seen:
            return None
        seen.add(shape)
        if self.gate_profile(shape).gate_key == measure(shape, self.options).gate_key:
            return None
        if not is_leaf(shape):
            for stage in plan_stages(shape, self.options):
                for item in stage:
                    if isinstance(item, MacroGate):
                        found = self._diverging(canonical_shape(item.black()), seen)
                        if found is not None:
                            return found
        return shape


@lru_cache(maxsize=16)
def get_estimator(options: SynthOptions = DEFAULT_OPTIONS) -> ResourceEstimator:
    """Return the shared estimator for options."""
    return ResourceEstimator(options)


def estimate(
    method: MethodId,
    n: int,
    u: OneQubitUnitary | None = None,
    options: SynthOptions = DEFAULT_OPTIONS,
) -> ResourceProfile:
    """Return the estimated resources of method on n controls."""
    return get_estimator(options).estimate(method, n, u)


def measure(gate: MacroGate, options: SynthOptions = DEFAULT_OPTIONS) -> ResourceProfile:
    """Lower gate and return its measured ASAP depth and gate counts."""
    tracker = DepthTracker(max(gate.wires) + 1)
    return tracker.extend(iter_lowered(gate, options)).profile


def log_spaced(low: int, high: int, points: int) -> list[int]:
    """Return up to points distinct integers log-spaced over [low, high]."""
    if not 1 <= low <= high:
        raise EstimationError(f"need 1 <= low <= high, got {low}, {high}")
    if points < 1:
        raise EstimationError(f"need at least one point, got {points}")
    if points == 1:
        return [low]
    grid = np.rint(np.geomspace(low, high, points)).astype(np.int64)
    return sorted({int(n) for n in grid} | {low, high})


@dataclass(frozen=True)
class ConsistencySample:
    """Estimated and measured profiles for one control count."""

    n: int
    estimated: ResourceProfile
    measured: ResourceProfile

    @property
    def matches(self) -> bool:
        return self.estimated.gate_key == self.measured.gate_key

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "estimated": list(self.estimated.gate_key),
            "measured": list(self.measured.gate_key),
            "matches": self.matches,
        }


@dataclass(frozen=True)
class ConsistencyReport:
    """Outcome of comparing the estimator with materialized circuits."""

    method: MethodId
    samples: tuple[ConsistencySample, ...] = ()
    divergence: str | None = None

    @property
    def passed(self) -> bool:
        return all(sample.matches for sample in self.samples)

    def to_dict(self) -> dict:
        return {
            "method": str(self.method),
            "passed": self.passed,
            "divergence": self.divergence,
            "samples": [sample.to_dict() for sample in self.samples],
        }


def _describe(shape: MacroGate) -> str:
    kind = str(shape.via) if shape.via is not None else "leaf"
    return f"{kind} with {len(shape.controls)} controls and {len(shape.ancillae)} ancillae"


def consistency_check(
    method: MethodId,
    n_max: int = DEFAULT_CONSISTENCY_MAX,
    options: SynthOptions = DEFAULT_OPTIONS,
    points: int = DEFAULT_CONSISTENCY_POINTS,
    u: OneQubitUnitary | None = None,
) -> ConsistencyReport:
    """Compare estimate with the lowered circuit at log-spaced n up to n_max."""
    estimator = get_estimator(options)
    low = minimum_controls(method)
    if n_max < low:
        raise EstimationError(f"{method} needs n_max >= {low}, got {n_max}")
    samples = []
    divergence = None
    for n in log_spaced(low, n_max, points):
        gate = build_gate(method, n, u)
        sample = ConsistencySample(n, estimator.gate_profile(gate), measure(gate, options))
        samples.append(sample)
        _LOGGER.debug(
            "Consistency %s n=%s: estimated %s, measured %s",
            method,
            n,
            sample.estimated.gate_key,
            sample.measured.gate_key,
        )
        if not sample.matches and divergence is None:
            shape = estimator.first_divergence(gate)
            divergence = _describe(shape) if shape is not None else f"top level at n={n}"
    return ConsistencyReport(method, tuple(samples), divergence)


def _grid_methods(
    method: Method, n: int, m_grid: Sequence[int], epsilon_grid: Sequence[float]
) -> list[MethodId]:
    if method is Method.ADJUSTABLE:
        return [MethodId(method, m=m) for m in m_grid if 2 <= m <= n]
    if method is Method.APPROX:
        return [MethodId(method, epsilon=epsilon) for epsilon in epsilon_grid]
    return [MethodId(method)]


def profile_row(method: MethodId, n: int, profile: ResourceProfile) -> dict:
    """Return the CSV row of one estimate, N/A cells left empty."""
    return {
        "method": str(method.method),
        "n": n,
        "m": method.m if method.m is not None else "",
        "epsilon": method.epsilon if method.epsilon is not None else "",
        "depth": profile.depth,
        "cnots": profile.cnot_count,
        "singles": profile.single_qubit_count,
        "zeroed": profile.zeroed_ancillae_used,
        "borrowed": profile.borrowed_ancillae_used,
        "error_bound": profile.error_bound,
    }


def sweep(
    methods: Iterable[Method | str],
    n_grid: Sequence[int],
    m_grid: Sequence[int] = (),
    epsilon_grid: Sequence[float] = (),
    options: SynthOptions = DEFAULT_OPTIONS,
    u: OneQubitUnitary | None = None,
) -> list[dict]:
    """Return one row per (method, n, m or epsilon) point in grid order."""
    methods = [Method(method) for method in methods]
    if not methods or not n_grid:
        raise EstimationError("sweep needs at least one method and one n")
    if Method.ADJUSTABLE in methods and not m_grid:
        raise EstimationError("adjustable sweep needs an m grid")
    if Method.APPROX in methods and not epsilon_grid:
        raise EstimationError("approx sweep needs an epsilon grid")
    estimator = get_estimator(options)
    rows = []
    for method in methods:
        for n in n_grid:
            for method_id in _grid_methods(method, n, m_grid, epsilon_grid):
                if n < minimum_controls(method_id):
                    continue
                profile = estimator.estimate(method_id, n, u)
                rows.append(profile_row(method_id, n, profile))
        _LOGGER.debug("Swept %s over %s control counts", method, len(n_grid))
    return rows


def write_csv(rows: Iterable[Mapping], stream: IO[str]) -> None:
    """Write sweep rows with the fixed CSV header."""
    writer = csv.DictWriter(stream, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: row[key] for key in CSV_HEADER})


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of depth against a declared variable."""

    model: str
    slope: float
    intercept: float
    r_squared: float
    coefficients: tuple[float, ...] = field(default=())

    def predict(self, row: Mapping) -> float:
        """Return the fitted depth at a row's n (and m for the adjustable shape)."""
        return float(np.dot(_design_row(self.model, row), self.coefficients))

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "coefficients": list(self.coefficients),
        }


def _design_row(model: str, row: Mapping) -> list[float]:
    n = float(row["n"])
    if model == "linear-in-n":
        return [n, 1.0]
    if model == "linear-in-log3n":
        return [math.log2(n) ** 3, 1.0]
    half = int(row["m"]) // 2
    return [math.log2(n / half) ** 3, math.log2(half), 1.0]


def fit_depth(rows: Sequence[Mapping], model: str = "linear-in-log3n") -> FitResult:
    """Fit depth by ordinary least squares in the model's variables (log base 2)."""
    if model not in FIT_MODELS:
        raise EstimationError(f"unknown fit model {model!r}, expected one of {FIT_MODELS}")
    if len(rows) < 3:
        raise EstimationError(f"fit needs at least 3 rows, got {len(rows)}")
    try:
        design = np.array([_design_row(model, row) for row in rows], dtype=float)
    except (KeyError, ValueError) as err:
        raise EstimationError(f"rows do not fit model {model}: {err}") from err
    depth = np.array([float(row["depth"]) for row in rows])
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise EstimationError(f"degenerate design matrix for model {model}")
    coefficients, *_ = np.linalg.lstsq(design, depth, rcond=None)
    residual = depth - design @ coefficients
    total = float(np.sum((depth - depth.mean()) ** 2))
    ss_res = float(residual @ residual)
    if total == 0.0:
        r_squared = 1.0 if ss_res <= 1e-12 else 0.0
    else:
        r_squared = min(1.0, max(0.0, 1.0 - ss_res / total))
    return FitResult(
        model,
        float(coefficients[0]),
        float(coefficients[-1]),
        r_squared,
        tuple(float(c) for c in coefficients),
    )


def literature_table() -> list[LiteratureRow]:
    """Return the published depth expressions kept for comparison."""
    return list(LITERATURE_ROWS)


def _literature_entry(
    row: LiteratureRow, n: int, m: int | None, epsilon: float
) -> dict:
    depth = None
    if not (row.needs_m and m is None):
        depth = row.evaluate(n, m, epsilon)
        if depth < 0:
            _LOGGER.warning("Literature row %s is negative at n=%s", row.key, n)
    return {
        "key": row.key,
        "name": row.name,
        "ancillae": row.ancillae,
        "expression": row.expression,
        "depth": depth,
        "epsilon": epsilon if row.needs_epsilon else None,
        "source": row.source,
    }


def compare(
    n: int,
    m: int | None = None,
    epsilon: float = DEFAULT_COMPARE_EPSILON,
    options: SynthOptions = DEFAULT_OPTIONS,
) -> dict:
    """Return this library's estimates beside the literature rows at n."""
    estimator = get_estimator(options)
    methods = []
    for method in PUBLIC_METHODS:
        if method is Method.ADJUSTABLE:
            if m is None or not 2 <= m <= n:
                continue
            method_id = MethodId(method, m=m)
        elif method is Method.APPROX:
            method_id = MethodId(method, epsilon=epsilon)
        else:
            method_id = MethodId(method)
        if n < minimum_controls(method_id):
            continue
        methods.append(profile_row(method_id, n, estimator.estimate(method_id, n)))
    literature = [_literature_entry(row, n, m, epsilon) for row in literature_table()]
    return {"n": n, "m": m, "epsilon": epsilon, "methods": methods, "literature": literature}
