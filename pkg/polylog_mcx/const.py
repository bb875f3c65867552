"""Constants for the polylog_mcx synthesis library."""

from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum
import math

# Recursion
DEFAULT_THRESHOLD = 30
MIN_THRESHOLD = 4
TEMPLATE_CACHE_SIZE = 4096

# Numerical tolerances
UNITARY_TOLERANCE = 1e-12
SPECIAL_UNITARY_TOLERANCE = 1e-10
IDENTITY_TOLERANCE = 1e-12
VERIFY_TOLERANCE = 1e-8

# Simulation bounds (wires, then amplitudes per batch)
MAX_UNITARY_WIDTH = 11
MAX_STATE_WIDTH = 20
SIMULATION_CHUNK = 1 << 22
MAX_SPECTRAL_WIDTH = 12
MAX_DENSE_SPECTRAL_WIDTH = 10

# Verification
DEFAULT_SEED = 1729
RANDOM_PROBES = 32
MAX_REPORTED_FAILURES = 16
POWER_ITERATION_TOLERANCE = 1e-4
POWER_ITERATION_CAP = 500

# Estimation
DEFAULT_CONSISTENCY_MAX = 2048
DEFAULT_CONSISTENCY_POINTS = 8
DEFAULT_SWEEP_MIN = 100
DEFAULT_SWEEP_MAX = 10_000_000
DEFAULT_SWEEP_POINTS = 25
DEFAULT_M_GRID = (2, 4, 16, 64, 256)
DEFAULT_EPSILON_GRID = (1e-1, 1e-3, 1e-7)
DEFAULT_COMPARE_EPSILON = 1e-7

CSV_HEADER = (
    "method",
    "n",
    "m",
    "epsilon",
    "depth",
    "cnots",
    "singles",
    "zeroed",
    "borrowed",
    "error_bound",
)

LITERATURE_FLAG = "literature (different base cases possible)"


class Method(StrEnum):
    """Synthesis methods known to the lowering engine."""

    POLYLOG_BORROWED = "polylog-borrowed"
    POLYLOG_ZEROED = "polylog-zeroed"
    APPROX = "approx"
    ADJUSTABLE = "adjustable"
    LADDER = "ladder"
    SPLIT = "split"
    LOG_TREE = "log-tree"
    MCU_ZEROED = "mcu-zeroed"
    MC_SU2 = "mc-su2"
    BASE = "base"


# Methods whose ancillae start and end in |0>
ZEROED_METHODS = frozenset(
    {Method.POLYLOG_ZEROED, Method.ADJUSTABLE, Method.LOG_TREE, Method.MCU_ZEROED}
)

# Methods synthesizing a multi-controlled unitary rather than a NOT
UNITARY_METHODS = frozenset({Method.APPROX, Method.MCU_ZEROED, Method.MC_SU2})

PUBLIC_METHODS = tuple(method for method in Method if method is not Method.BASE)

DEFAULT_SWEEP_METHODS = (
    Method.POLYLOG_BORROWED,
    Method.POLYLOG_ZEROED,
    Method.SPLIT,
    Method.LADDER,
    Method.ADJUSTABLE,
    Method.APPROX,
)

DEFAULT_UNITARY = {
    Method.APPROX: "x",
    Method.MCU_ZEROED: "h",
    Method.MC_SU2: "h",
}

# CLI
COMMANDS = ("synth", "verify", "estimate", "sweep", "compare", "check")
VERIFY_MODES = ("auto", "exhaustive", "randomized")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

CONF_COMMAND = "command"
CONF_METHOD = "method"
CONF_N = "n"
CONF_ANCILLAE = "ancillae"
CONF_EPSILON = "epsilon"
CONF_UNITARY = "unitary"
CONF_THRESHOLD = "threshold"
CONF_CONJUGATE_ORDERING = "conjugate_ordering"
CONF_SEED = "seed"
CONF_MODE = "mode"
CONF_QASM_OUT = "qasm_out"
CONF_CSV_OUT = "csv_out"
CONF_JSON = "json"
CONF_METHODS = "methods"
CONF_N_MIN = "n_min"
CONF_N_MAX = "n_max"
CONF_POINTS = "points"
CONF_M_GRID = "m_grid"
CONF_EPSILON_GRID = "epsilon_grid"


def _log(value: float) -> float:
    return math.log2(value)


def _ceil_log(value: float) -> int:
    return math.ceil(math.log2(value))


@dataclass(frozen=True, kw_only=True)
class LiteratureRow:
    """Published depth fit kept for side-by-side comparison."""

    key: str
    name: str
    ancillae: str
    expression: str
    evaluate: Callable[[int, int | None, float | None], float]
    needs_m: bool = False
    needs_epsilon: bool = False
    source: str = LITERATURE_FLAG


LITERATURE_ROWS = [
    LiteratureRow(
        key="gidney",
        name="Gidney (ancilla-free, linear)",
        ancillae="0",
        expression="494n-1413",
        evaluate=lambda n, m, eps: 494 * n - 1413,
    ),
    LiteratureRow(
        key="silva",
        name="Silva et al. (approximate, eps=1e-7)",
        ancillae="0",
        expression="64n+1645",
        evaluate=lambda n, m, eps: 64 * n + 1645,
    ),
    LiteratureRow(
        key="approx-polylog",
        name="Approximate polylog",
        ancillae="0",
        expression="ceil(log(pi/eps))*(86log(n)^3-2564)",
        evaluate=lambda n, m, eps: _ceil_log(math.pi / eps) * (86 * _log(n) ** 3 - 2564),
        needs_epsilon=True,
    ),
    LiteratureRow(
        key="barenco-one-borrowed",
        name="Barenco 1 (borrowed)",
        ancillae="1 borrowed",
        expression="48n-148",
        evaluate=lambda n, m, eps: 48 * n - 148,
    ),
    LiteratureRow(
        key="barenco-ladder-borrowed",
        name="Barenco n-2 (borrowed)",
        ancillae="n-2 borrowed",
        expression="24n-43",
        evaluate=lambda n, m, eps: 24 * n - 43,
    ),
    LiteratureRow(
        key="polylog-borrowed",
        name="Polylog (borrowed)",
        ancillae="1 borrowed",
        expression="43log(n)^3-1287",
        evaluate=lambda n, m, eps: 43 * _log(n) ** 3 - 1287,
    ),
    LiteratureRow(
        key="barenco-one-zeroed",
        name="Barenco 1 (zeroed)",
        ancillae="1 zeroed",
        expression="36n-111",
        evaluate=lambda n, m, eps: 36 * n - 111,
    ),
    LiteratureRow(
        key="barenco-ladder-zeroed",
        name="Barenco n-2 (zeroed)",
        ancillae="n-2 zeroed",
        expression="12n-12",
        evaluate=lambda n, m, eps: 12 * n - 12,
    ),
    LiteratureRow(
        key="polylog-zeroed",
        name="Polylog (zeroed)",
        ancillae="1 zeroed",
        expression="27log(n)^3-808",
        evaluate=lambda n, m, eps: 27 * _log(n) ** 3 - 808,
    ),
    LiteratureRow(
        key="adjustable",
        name="Adjustable depth",
        ancillae="m zeroed",
        expression="27log(n/ceil(m/2))^3+16ceil(log(floor(m/2)))-808",
        evaluate=lambda n, m, eps: 27 * _log(n / math.ceil(m / 2)) ** 3
        + 16 * _ceil_log(m // 2)
        - 808,
        needs_m=True,
    ),
    LiteratureRow(
        key="he",
        name="He et al. (log tree)",
        ancillae="n zeroed",
        expression="16ceil(log(n))+12",
        evaluate=lambda n, m, eps: 16 * _ceil_log(n) + 12,
    ),
    LiteratureRow(
        key="su2-naive",
        name="Peeled SU(2), plain ordering",
        ancillae="0",
        expression="86log(n)^3",
        evaluate=lambda n, m, eps: 86 * _log(n) ** 3,
    ),
    LiteratureRow(
        key="su2-conjugate",
        name="Peeled SU(2), conjugate ordering",
        ancillae="0",
        expression="76log(n)^3",
        evaluate=lambda n, m, eps: 76 * _log(n) ** 3,
    ),
]
