"""Robustness verification for temporally encoded spiking neural networks.

Two independent decision procedures over the same perturbation set: a
direct exhaustive search driven by an exact IF-network simulator, and a
satisfiability check of the equivalent constraint system through any
SMT-LIB 2 solver process.  Exact combinatorics of perturbation-space
sizes are included for the rate-vs-temporal encoding comparison.
"""

__version__ = "0.1.0"

from .model import (
    DomainError,
    ModelConfig,
    NetworkTrace,
    Prediction,
    SnnError,
    SnnModel,
    SpikeTimes,
    UsageError,
)
from .encoding import encode_intensities
from .simulator import infer, predict, simulate, validate_trace
from .perturbation import (
    SpaceCount,
    count_rate,
    count_temporal,
    enumerate_perturbations,
    space_ratio,
    temporal_upper_bound,
)
from .dcs import Verdict, VerdictKind, dcs_verify
from .smt import (
    build_constraints,
    default_solver_command,
    emit_smtlib,
    extract_counterexample,
    smt_verify,
    solve,
)
from .data_io import downscale, load_idx, load_model, save_model
from .bench import BenchPlan, gen_input, gen_model, linear_fit, run_bench

__all__ = [
    "BenchPlan",
    "DomainError",
    "ModelConfig",
    "NetworkTrace",
    "Prediction",
    "SnnError",
    "SnnModel",
    "SpaceCount",
    "SpikeTimes",
    "UsageError",
    "Verdict",
    "VerdictKind",
    "build_constraints",
    "count_rate",
    "count_temporal",
    "dcs_verify",
    "default_solver_command",
    "downscale",
    "emit_smtlib",
    "encode_intensities",
    "enumerate_perturbations",
    "extract_counterexample",
    "gen_input",
    "gen_model",
    "infer",
    "linear_fit",
    "load_idx",
    "load_model",
    "predict",
    "run_bench",
    "save_model",
    "simulate",
    "smt_verify",
    "solve",
    "space_ratio",
    "temporal_upper_bound",
    "validate_trace",
]
