"""Temporal diagnosis of component-based systems.

Components carry a discrete set of behavioral modes (one correct, the rest
faulty) evolving as a discrete-time Markov chain; an atemporal Horn-rule
model links modes to observable manifestations. The engine solves the
diagnosis problem at every observed instant, filters mode evolutions by
their transition probability, ranks them jointly, and can revise the
stochastic predictions against the logically admitted hypotheses.
"""

__version__ = "0.1.0"

from .atemporal import (
    ExplanationCriterion,
    ModeAssignment,
    is_explanation,
    predicted_manifestations,
    solve_atemporal,
)
from .errors import DiagnosisError, ValidationError
from .markov import (
    FaultClass,
    FaultClassification,
    ModeDistribution,
    StateClassification,
    StateLabel,
    TransitionMatrix,
    classify_faults,
    classify_states,
    matrix_power,
    propagate_distribution,
    sojourn_pmf,
    validate_distribution,
    validate_matrix,
)
from .model import (
    ComponentSpec,
    HornRule,
    Observation,
    ObservationStream,
    SystemModel,
    validate_model,
    validate_stream,
)
from .revision import (
    ComponentRevision,
    InstantRevision,
    admitted_modes,
    component_mass_factor,
    normalization_factor,
    posterior_component_distribution,
    revise_global,
    revise_transition,
    revise_trellis,
)
from .simulate import (
    EmpiricalMatrix,
    SampledTrajectory,
    empirical_transition_matrix,
    generate_observation_stream,
    sample_trajectory,
)
from .temporal import (
    DiagnosticProblem,
    TemporalDiagnosis,
    ThresholdMode,
    Trellis,
    TrellisEdge,
    admissible_step,
    build_trellis,
    conditional_probability,
    enumerate_temporal_diagnoses,
    induce_initial_distributions,
    joint_probability,
    prior_probability,
    relevant_instants,
    resolve_initial_distributions,
    step_factors,
)

__all__ = [
    "ComponentRevision",
    "ComponentSpec",
    "DiagnosisError",
    "DiagnosticProblem",
    "EmpiricalMatrix",
    "ExplanationCriterion",
    "FaultClass",
    "FaultClassification",
    "HornRule",
    "InstantRevision",
    "ModeAssignment",
    "ModeDistribution",
    "Observation",
    "ObservationStream",
    "SampledTrajectory",
    "StateClassification",
    "StateLabel",
    "SystemModel",
    "TemporalDiagnosis",
    "ThresholdMode",
    "TransitionMatrix",
    "Trellis",
    "TrellisEdge",
    "ValidationError",
    "admissible_step",
    "admitted_modes",
    "build_trellis",
    "classify_faults",
    "classify_states",
    "component_mass_factor",
    "conditional_probability",
    "empirical_transition_matrix",
    "enumerate_temporal_diagnoses",
    "generate_observation_stream",
    "induce_initial_distributions",
    "is_explanation",
    "joint_probability",
    "matrix_power",
    "normalization_factor",
    "posterior_component_distribution",
    "predicted_manifestations",
    "prior_probability",
    "propagate_distribution",
    "relevant_instants",
    "resolve_initial_distributions",
    "revise_global",
    "revise_transition",
    "revise_trellis",
    "sample_trajectory",
    "sojourn_pmf",
    "solve_atemporal",
    "step_factors",
    "validate_distribution",
    "validate_matrix",
    "validate_model",
    "validate_stream",
]
