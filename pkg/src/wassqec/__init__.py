"""Variational search for quantum error-correction circuits with fidelity and Wasserstein-type costs."""

from .ansatz import (
    DEFAULT_LAYERS,
    ParametricCircuit,
    Rotation,
    build_ansatz,
    exact_code_params,
    instantiate,
    two_design_states,
)
from .cost import (
    CostHamiltonian,
    PipelineSpec,
    average_fidelity,
    averaged_output_state,
    baseline_f0,
    baseline_f0_strong,
    cost_value,
)
from .engine import Evaluator
from .experiment import ExperimentConfig, report_baselines, run_batch, run_two_stage
from .noise import NoiseSpec, build_noise_channel
from .optimize import OptimizerConfig, RunRecord, descend, grad_alpha, grad_beta
from .qsim import DensityMatrix, KrausChannel, QubitLayout, UnitaryGate

__all__ = [
    "DEFAULT_LAYERS",
    "CostHamiltonian",
    "DensityMatrix",
    "Evaluator",
    "ExperimentConfig",
    "KrausChannel",
    "NoiseSpec",
    "OptimizerConfig",
    "ParametricCircuit",
    "PipelineSpec",
    "QubitLayout",
    "Rotation",
    "RunRecord",
    "UnitaryGate",
    "average_fidelity",
    "averaged_output_state",
    "baseline_f0",
    "baseline_f0_strong",
    "build_ansatz",
    "build_noise_channel",
    "cost_value",
    "descend",
    "exact_code_params",
    "grad_alpha",
    "grad_beta",
    "instantiate",
    "report_baselines",
    "run_batch",
    "run_two_stage",
    "two_design_states",
]
