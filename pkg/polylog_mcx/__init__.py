"""Polylogarithmic-depth synthesis of multi-controlled NOT and unitary gates.

Importing the package registers every lowering routine with the engine.
"""

from . import adjustable, approx, baselines, estimator, polylog  # noqa: F401
from .adjustable import adjustable_depth_estimate, synth_mcx_adjustable
from .approx import plan_approx, synth_mcu_approx, truncation_error_bound
from .baselines import base_case_mcx, synth_ladder, synth_log_tree, synth_split
from .circuit import (
    Circuit,
    CircuitError,
    MacroGate,
    McxError,
    MethodId,
    OneQubitUnitary,
    ResourceProfile,
    Role,
    SynthesisError,
    asap_depth,
    gate_counts,
    inverse,
    validate,
)
from .const import Method
from .engine import SynthOptions, build_gate, lower, lower_gate
from .estimator import EstimationError, consistency_check, estimate, fit_depth, sweep
from .gates import NotSpecialUnitaryError, abc_decompose, principal_root
from .polylog import (
    make_partition,
    synth_frak_C,
    synth_mc_su2,
    synth_mcu_one_zeroed,
    synth_mcx_one_borrowed,
    synth_mcx_one_zeroed,
)
from .qasm import export_qasm
from .verifier import (
    IdealSpec,
    VerificationError,
    circuit_unitary,
    spectral_error,
    verify_exact,
)

__all__ = [
    "Circuit",
    "CircuitError",
    "EstimationError",
    "IdealSpec",
    "MacroGate",
    "McxError",
    "Method",
    "MethodId",
    "NotSpecialUnitaryError",
    "OneQubitUnitary",
    "ResourceProfile",
    "Role",
    "SynthOptions",
    "SynthesisError",
    "VerificationError",
    "abc_decompose",
    "adjustable_depth_estimate",
    "asap_depth",
    "base_case_mcx",
    "build_gate",
    "circuit_unitary",
    "consistency_check",
    "estimate",
    "export_qasm",
    "fit_depth",
    "gate_counts",
    "inverse",
    "lower",
    "lower_gate",
    "make_partition",
    "plan_approx",
    "principal_root",
    "spectral_error",
    "sweep",
    "synth_frak_C",
    "synth_ladder",
    "synth_log_tree",
    "synth_mc_su2",
    "synth_mcu_approx",
    "synth_mcu_one_zeroed",
    "synth_mcx_adjustable",
    "synth_mcx_one_borrowed",
    "synth_mcx_one_zeroed",
    "synth_split",
    "truncation_error_bound",
    "validate",
    "verify_exact",
]
