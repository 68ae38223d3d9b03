"""Discrete probabilistic-network toolkit for offender-profile inference.

Build or learn a network over discrete case variables, simulate solved-case
databases by ancestral sampling, compute exact posteriors from partial
evidence, and evaluate profile predictions on held-out cases.
"""

from .cases import CaseRecord, Dataset, MISSING
from .errors import (
    CaseDataError,
    CycleError,
    DataFormatError,
    EvidenceError,
    ImpossibleEvidenceError,
    InvalidNetworkError,
    ProfilerNetError,
)
from .estimator import NetworkProfiler
from .inference import (
    Evidence,
    Posterior,
    Prediction,
    check_evidence,
    joint_probability,
    posterior_by_enumeration,
    posterior_ve,
    predict,
)
from .learning import (
    DEFAULT_SEED,
    StructureSearchConfig,
    SufficientCounts,
    bic_family_scores,
    bic_score,
    collect_counts,
    counts_to_network,
    fit_parameters,
    incremental_update,
    learn_structure,
    same_markov_equivalence_class,
    split_dataset,
)
from .model import (
    Cpt,
    Network,
    NetworkStructure,
    VariableDef,
    Violation,
    assert_valid,
    make_network,
    parent_config_from_index,
    parent_config_index,
    topological_order,
    validate_network,
)
from .profiling import (
    EvaluationReport,
    PipelineConfig,
    VariableEvaluation,
    evaluate,
    evidence_from_case,
    predict_profile,
    run_pipeline,
)
from .sampling import SampleSeed, cumulative_ranges, draw_state, sample_case, simulate_dataset

__version__ = "0.1.0"

__all__ = [
    "CaseDataError", "CaseRecord", "Cpt", "CycleError", "DataFormatError",
    "Dataset", "DEFAULT_SEED", "EvaluationReport", "Evidence", "EvidenceError",
    "ImpossibleEvidenceError", "InvalidNetworkError", "MISSING", "Network",
    "NetworkProfiler", "NetworkStructure", "PipelineConfig", "Posterior",
    "Prediction", "ProfilerNetError", "SampleSeed", "StructureSearchConfig",
    "SufficientCounts", "VariableDef", "VariableEvaluation", "Violation",
    "assert_valid", "bic_family_scores", "bic_score", "check_evidence",
    "collect_counts", "counts_to_network", "cumulative_ranges", "draw_state",
    "evaluate", "evidence_from_case", "fit_parameters", "incremental_update",
    "joint_probability", "learn_structure", "make_network",
    "parent_config_from_index", "parent_config_index",
    "posterior_by_enumeration", "posterior_ve", "predict", "predict_profile",
    "run_pipeline", "same_markov_equivalence_class", "sample_case",
    "simulate_dataset", "split_dataset", "topological_order",
    "validate_network",
]
