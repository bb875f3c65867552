"""Shared pytest fixtures."""

import numpy as np
import pytest

from polylog_mcx.const import DEFAULT_SEED
from polylog_mcx.engine import SynthOptions


@pytest.fixture
def small_options() -> SynthOptions:
    """Options whose low threshold drives the recursion at small n."""
    return SynthOptions(threshold=4)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(DEFAULT_SEED)
