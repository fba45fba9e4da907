"""Qubit dephasing under random phase kicks with correlated noise."""

from ._backend import DEFAULT as BACKEND
from .analysis import DecayFit, ParrondoReport, fit_decay, parrondo_report
from .errors import (
    ConfigError,
    ContractViolation,
    EnumerationLimitError,
    InsufficientDataError,
    InvalidInputError,
    PhaseKickError,
    ResourceLimitError,
    UnsupportedProcessError,
)
from .exact import (
    CoherenceFactorTable,
    CoherenceTrace,
    characteristic_value,
    coherence_factor_fully_correlated,
    coherence_factor_iid_gaussian,
    coherence_recursion,
    enumerate_exact,
    exact_trace,
    factor_tables,
    propagate_markov,
    reachable_support,
)
from .montecarlo import McEstimate, SamplerSpec, mc_trace, sample_trajectory
from .noise import (
    Branch,
    DiscreteDistribution,
    FullyCorrelatedGaussian,
    HistoryDependent,
    IIDDiscrete,
    IIDGaussian,
    Markov,
    MarkovKickKernel,
    Mixture,
    ParrondoParams,
    canonical_angle,
    mix_kernels,
    parrondo_mixture,
    parrondo_pair,
    trajectory_log_probability,
)
from .qubit import (
    DensityMatrix,
    apply_phase_rotation,
    coherence_magnitude,
    dephase,
    purity,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Branch",
    "CoherenceFactorTable",
    "CoherenceTrace",
    "ConfigError",
    "ContractViolation",
    "DecayFit",
    "DensityMatrix",
    "DiscreteDistribution",
    "EnumerationLimitError",
    "FullyCorrelatedGaussian",
    "HistoryDependent",
    "IIDDiscrete",
    "IIDGaussian",
    "InsufficientDataError",
    "InvalidInputError",
    "Markov",
    "MarkovKickKernel",
    "McEstimate",
    "Mixture",
    "ParrondoParams",
    "ParrondoReport",
    "PhaseKickError",
    "ResourceLimitError",
    "SamplerSpec",
    "UnsupportedProcessError",
    "apply_phase_rotation",
    "canonical_angle",
    "characteristic_value",
    "coherence_factor_fully_correlated",
    "coherence_factor_iid_gaussian",
    "coherence_magnitude",
    "coherence_recursion",
    "dephase",
    "enumerate_exact",
    "exact_trace",
    "factor_tables",
    "fit_decay",
    "mc_trace",
    "mix_kernels",
    "parrondo_mixture",
    "parrondo_pair",
    "parrondo_report",
    "propagate_markov",
    "purity",
    "reachable_support",
    "sample_trajectory",
    "trajectory_log_probability",
]
