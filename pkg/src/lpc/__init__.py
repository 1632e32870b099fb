"""SWAP-free linear parity compilation for QAOA and QFT on nearest-neighbour chains."""

from .baseline import compile_baseline_qaoa, fixed_angle_lowering, route_qft, swap_network_zz
from .circuit import Circuit, Gate, ResourceReport, parse, resource_report, serialize, two_qubit_depth
from .compiler import (
    CompilationResult,
    QAOAInstance,
    compile_qaoa,
    compile_qft,
    decompose_cphase,
    lower_cnot_to_rzz,
    mixer_layer,
    phase_separator_schedule,
)
from .cost import CostEstimate, CostParams, estimate, fit_power_law
from .parity import FlowState, apply_cnot, decode_plan, initial_state, is_spanning_line, locate

__all__ = [
    "Circuit",
    "CompilationResult",
    "CostEstimate",
    "CostParams",
    "FlowState",
    "Gate",
    "QAOAInstance",
    "ResourceReport",
    "apply_cnot",
    "compile_baseline_qaoa",
    "compile_qaoa",
    "compile_qft",
    "decode_plan",
    "decompose_cphase",
    "estimate",
    "fit_power_law",
    "fixed_angle_lowering",
    "initial_state",
    "is_spanning_line",
    "locate",
    "lower_cnot_to_rzz",
    "mixer_layer",
    "parse",
    "phase_separator_schedule",
    "resource_report",
    "route_qft",
    "serialize",
    "swap_network_zz",
    "two_qubit_depth",
]
