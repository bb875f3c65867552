"""Validated command-line configuration."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
import logging
from pathlib import Path
from typing import Any

import voluptuous as vol

from .circuit import MethodId, OneQubitUnitary
from .const import (
    COMMANDS,
    CONF_ANCILLAE,
    CONF_COMMAND,
    CONF_CONJUGATE_ORDERING,
    CONF_CSV_OUT,
    CONF_EPSILON,
    CONF_EPSILON_GRID,
    CONF_JSON,
    CONF_M_GRID,
    CONF_METHOD,
    CONF_METHODS,
    CONF_MODE,
    CONF_N,
    CONF_N_MAX,
    CONF_N_MIN,
    CONF_POINTS,
    CONF_QASM_OUT,
    CONF_SEED,
    CONF_THRESHOLD,
    CONF_UNITARY,
    DEFAULT_COMPARE_EPSILON,
    DEFAULT_CONSISTENCY_MAX,
    DEFAULT_CONSISTENCY_POINTS,
    DEFAULT_EPSILON_GRID,
    DEFAULT_M_GRID,
    DEFAULT_SEED,
    DEFAULT_SWEEP_MAX,
    DEFAULT_SWEEP_METHODS,
    DEFAULT_SWEEP_MIN,
    DEFAULT_SWEEP_POINTS,
    DEFAULT_THRESHOLD,
    MIN_THRESHOLD,
    PUBLIC_METHODS,
    UNITARY_METHODS,
    VERIFY_MODES,
    Method,
)
from .engine import SynthOptions, minimum_controls
from .gates import NAMED_GATES

_LOGGER = logging.getLogger(__name__)

_METHOD_NAMES = [str(method) for method in PUBLIC_METHODS]
_POSITIVE_INT = vol.All(vol.Coerce(int), vol.Range(min=1))
_POSITIVE_FLOAT = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))


def _csv_list(item_schema):
    """Accept a comma separated string or a sequence, validating each item."""

    def validator(value):
        if isinstance(value, str):
            value = [part.strip() for part in value.split(",") if part.strip()]
        if not value:
            raise vol.Invalid("expected a non-empty list")
        return tuple(item_schema(item) for item in value)

    return validator


CONFIG_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_COMMAND): vol.In(COMMANDS),
        vol.Optional(CONF_METHOD): vol.In(_METHOD_NAMES),
        vol.Optional(CONF_N): _POSITIVE_INT,
        vol.Optional(CONF_ANCILLAE): vol.All(vol.Coerce(int), vol.Range(min=2)),
        vol.Optional(CONF_EPSILON): _POSITIVE_FLOAT,
        vol.Optional(CONF_UNITARY): vol.All(str, vol.Lower, vol.In(sorted(NAMED_GATES))),
        vol.Optional(CONF_THRESHOLD, default=DEFAULT_THRESHOLD): vol.All(
            vol.Coerce(int), vol.Range(min=MIN_THRESHOLD)
        ),
        vol.Optional(CONF_CONJUGATE_ORDERING, default=True): bool,
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.Coerce(int),
        vol.Optional(CONF_MODE, default="auto"): vol.In(VERIFY_MODES),
        vol.Optional(CONF_QASM_OUT): vol.Coerce(Path),
        vol.Optional(CONF_CSV_OUT): vol.Coerce(Path),
        vol.Optional(CONF_JSON, default=False): bool,
        vol.Optional(CONF_METHODS): _csv_list(vol.In(_METHOD_NAMES)),
        vol.Optional(CONF_N_MIN): _POSITIVE_INT,
        vol.Optional(CONF_N_MAX): _POSITIVE_INT,
        vol.Optional(CONF_POINTS): _POSITIVE_INT,
        vol.Optional(CONF_M_GRID, default=DEFAULT_M_GRID): _csv_list(
            vol.All(vol.Coerce(int), vol.Range(min=2))
        ),
        vol.Optional(CONF_EPSILON_GRID, default=DEFAULT_EPSILON_GRID): _csv_list(
            _POSITIVE_FLOAT
        ),
    },
    extra=vol.REMOVE_EXTRA,
)


@dataclass(frozen=True, kw_only=True)
class CliConfig:
    """One validated command invocation."""

    command: str
    method: Method | None = None
    n: int | None = None
    ancillae: int | None = None
    epsilon: float | None = None
    unitary: str | None = None
    threshold: int = DEFAULT_THRESHOLD
    conjugate_ordering: bool = True
    seed: int = DEFAULT_SEED
    mode: str = "auto"
    qasm_out: Path | None = None
    csv_out: Path | None = None
    json: bool = False
    methods: tuple[Method, ...] = DEFAULT_SWEEP_METHODS
    n_min: int = DEFAULT_SWEEP_MIN
    n_max: int = DEFAULT_SWEEP_MAX
    points: int = DEFAULT_SWEEP_POINTS
    m_grid: tuple[int, ...] = DEFAULT_M_GRID
    epsilon_grid: tuple[float, ...] = DEFAULT_EPSILON_GRID

    @property
    def options(self) -> SynthOptions:
        return SynthOptions(self.threshold, self.conjugate_ordering)

    @property
    def method_id(self) -> MethodId:
        """Return the method with its parameters attached."""
        return MethodId(
            self.method,
            m=self.ancillae if self.method is Method.ADJUSTABLE else None,
            epsilon=self.epsilon if self.method is Method.APPROX else None,
        )

    @property
    def u(self) -> OneQubitUnitary | None:
        return NAMED_GATES[self.unitary] if self.unitary is not None else None


def _require(config: Mapping[str, Any], key: str, command: str) -> None:
    if config.get(key) is None:
        raise vol.Invalid(f"{command} needs --{key.replace('_', '-')}", path=[key])


def _check_method(config: dict[str, Any]) -> None:
    command = config[CONF_COMMAND]
    _require(config, CONF_METHOD, command)
    method = Method(config[CONF_METHOD])
    config[CONF_METHOD] = method
    n = config.get(CONF_N) if command != "check" else config.get(CONF_N_MAX)
    if method is Method.ADJUSTABLE:
        _require(config, CONF_ANCILLAE, command)
        if n is not None and config[CONF_ANCILLAE] > n:
            raise vol.Invalid(
                f"adjustable needs 2 <= m <= n, got m={config[CONF_ANCILLAE]}, n={n}",
                path=[CONF_ANCILLAE],
            )
    elif config.get(CONF_ANCILLAE) is not None:
        raise vol.Invalid("--ancillae applies to adjustable only", path=[CONF_ANCILLAE])
    if method is Method.APPROX:
        _require(config, CONF_EPSILON, command)
    elif config.get(CONF_EPSILON) is not None:
        raise vol.Invalid("--epsilon applies to approx only", path=[CONF_EPSILON])
    if config.get(CONF_UNITARY) is not None and method not in UNITARY_METHODS:
        raise vol.Invalid(f"{method} synthesizes a NOT; drop --unitary", path=[CONF_UNITARY])
    low = minimum_controls(
        MethodId(
            method,
            m=config.get(CONF_ANCILLAE) if method is Method.ADJUSTABLE else None,
            epsilon=config.get(CONF_EPSILON) if method is Method.APPROX else None,
        )
    )
    if n is not None and n < low:
        raise vol.Invalid(f"{method} needs at least {low} controls, got {n}", path=[CONF_N])


def build_config(values: Mapping[str, Any]) -> CliConfig:
    """Validate raw values (None meaning unset) into a CliConfig."""
    config = CONFIG_SCHEMA({k: v for k, v in values.items() if v is not None})
    command = config[CONF_COMMAND]
    if command == "check":
        config.setdefault(CONF_N_MAX, DEFAULT_CONSISTENCY_MAX)
        config.setdefault(CONF_POINTS, DEFAULT_CONSISTENCY_POINTS)
    if command in ("synth", "verify", "estimate", "check"):
        if command != "check":
            _require(config, CONF_N, command)
        _check_method(config)
    elif command == "compare":
        _require(config, CONF_N, command)
        if config.get(CONF_ANCILLAE) is not None and config[CONF_ANCILLAE] > config[CONF_N]:
            raise vol.Invalid("compare needs 2 <= m <= n", path=[CONF_ANCILLAE])
        config.setdefault(CONF_EPSILON, DEFAULT_COMPARE_EPSILON)
    elif command == "sweep":
        config[CONF_METHODS] = tuple(
            Method(method) for method in config.get(CONF_METHODS, DEFAULT_SWEEP_METHODS)
        )
        config.setdefault(CONF_N_MIN, DEFAULT_SWEEP_MIN)
        config.setdefault(CONF_N_MAX, DEFAULT_SWEEP_MAX)
        config.setdefault(CONF_POINTS, DEFAULT_SWEEP_POINTS)
        if config[CONF_N_MIN] > config[CONF_N_MAX]:
            raise vol.Invalid("sweep needs n-min <= n-max", path=[CONF_N_MIN])
    _LOGGER.debug("Validated configuration: %s", config)
    return CliConfig(**config)
