"""End-to-end profiling: predict offender variables from scene evidence and
score the predictions on held-out solved cases.

Evaluation strips every validation case down to its input-role variables,
infers each output-role variable, and compares the argmax prediction to the
recorded state. Cases whose evidence has zero probability under the model
are counted separately and excluded from accuracy denominators; scoring
them would conflate model misfit with prediction error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .cases import Dataset, MISSING
from .errors import CaseDataError, EvidenceError, ImpossibleEvidenceError
from .inference import Evidence, Prediction, check_evidence, posterior_ve, predict
from .learning import (
    DEFAULT_SEED,
    StructureSearchConfig,
    fit_parameters,
    learn_structure,
    split_dataset,
)
from .model import Network, NetworkStructure, VariableDef


def predict_profile(net: Network, evidence: Evidence) -> list[Prediction]:
    """One prediction per output-role variable, given the evidence.

    Output variables may not appear in the evidence: the profile is what is
    being inferred.
    """
    check_evidence(net, evidence)
    outputs = net.output_ids
    for var_id in outputs:
        if var_id in evidence:
            raise EvidenceError(
                "bad_state", f"output variable '{var_id}' cannot be used as evidence"
            )
    return [predict(posterior_ve(net, evidence, var_id)) for var_id in outputs]


@dataclass
class VariableEvaluation:
    """Prediction quality for one output variable over the validation set."""

    variable_id: str
    states: tuple[str, ...]
    n_cases: int = 0
    n_correct: int = 0
    confidence_sum: float = 0.0
    confusion: np.ndarray = None  # predicted state x observed state

    def __post_init__(self):
        if self.confusion is None:
            r = len(self.states)
            self.confusion = np.zeros((r, r), dtype=np.int64)

    @property
    def accuracy(self) -> float:
        return self.n_correct / self.n_cases if self.n_cases else float("nan")

    @property
    def mean_confidence(self) -> float:
        return self.confidence_sum / self.n_cases if self.n_cases else float("nan")


@dataclass
class EvaluationReport:
    """Per-variable and aggregate prediction quality plus run provenance."""

    per_variable: dict[str, VariableEvaluation]
    n_cases: int
    n_impossible: int
    metadata: dict[str, str] = field(default_factory=dict)

    @property
    def macro_accuracy(self) -> float:
        accs = [e.accuracy for e in self.per_variable.values() if e.n_cases]
        return float(np.mean(accs)) if accs else float("nan")

    def to_dict(self) -> dict:
        return {
            "metadata": dict(self.metadata),
            "cases_evaluated": self.n_cases,
            "cases_impossible": self.n_impossible,
            "macro_accuracy": self.macro_accuracy,
            "variables": {
                var_id: {
                    "states": list(e.states),
                    "n_cases": e.n_cases,
                    "n_correct": e.n_correct,
                    "accuracy": e.accuracy,
                    "mean_confidence": e.mean_confidence,
                    "confusion": e.confusion.tolist(),
                }
                for var_id, e in self.per_variable.items()
            },
        }


def evidence_from_case(net: Network, values: Mapping[str, int]) -> dict[str, int]:
    """Evidence for evaluation: the case restricted to input-role variables."""
    return {
        var_id: values[var_id]
        for var_id in net.input_ids
        if var_id in values and values[var_id] != MISSING
    }


def evaluate(net: Network, validation: Dataset,
             metadata: Mapping[str, str] | None = None) -> EvaluationReport:
    """Score argmax profile predictions against observed offender states."""
    outputs = net.output_ids
    if not outputs:
        raise ValueError("network declares no output-role variables to evaluate")
    if not validation.is_complete:
        raise CaseDataError("validation cases must be complete")
    for var_id in net.var_ids:
        if var_id not in validation.variables:
            raise CaseDataError(f"validation dataset lacks a column for '{var_id}'")

    per_var = {
        var_id: VariableEvaluation(var_id, net.variable(var_id).states)
        for var_id in outputs
    }
    n_scored = 0
    n_impossible = 0
    input_cols = {v: validation.column(v) for v in net.input_ids}
    output_cols = {v: validation.column(v) for v in outputs}
    for i in range(len(validation)):
        evidence = {v: int(col[i]) for v, col in input_cols.items()}
        try:
            predictions = predict_profile(net, evidence)
        except ImpossibleEvidenceError:
            n_impossible += 1
            continue
        n_scored += 1
        for pred in predictions:
            observed = int(output_cols[pred.variable_id][i])
            e = per_var[pred.variable_id]
            e.n_cases += 1
            e.confidence_sum += pred.confidence
            e.confusion[pred.predicted_state, observed] += 1
            if pred.predicted_state == observed:
                e.n_correct += 1

    return EvaluationReport(per_var, n_scored, n_impossible, dict(metadata or {}))


@dataclass(frozen=True)
class PipelineConfig:
    """Controls for the train-and-validate pipeline."""

    train_fraction: float = 0.8
    alpha: float = 1.0
    seed: int = DEFAULT_SEED
    learn_structure: bool = False
    structure: NetworkStructure | None = None
    search: StructureSearchConfig | None = None


def run_pipeline(dataset: Dataset, variables: Sequence[VariableDef],
                 config: PipelineConfig) -> tuple[Network, EvaluationReport]:
    """Split the solved cases, train on T, evaluate on V.

    Every seed and fraction is recorded in the report metadata so a run can
    be reproduced exactly.
    """
    train, validation = split_dataset(dataset, config.train_fraction, config.seed)
    if len(validation) == 0 or len(train) == 0:
        raise ValueError(
            f"split left an empty side (|T|={len(train)}, |V|={len(validation)}); "
            "adjust train_fraction"
        )

    if config.learn_structure:
        search = config.search or StructureSearchConfig(
            tier_constraint=True, seed=config.seed,
            initial_edges=config.structure.edges if config.structure else None,
        )
        structure = learn_structure(train, variables, search)
        structure_source = "learned"
    else:
        if config.structure is None:
            raise ValueError("PipelineConfig needs a structure unless learn_structure=True")
        structure = config.structure
        structure_source = "given"

    metadata = {
        "version": "trained",
        "seed": str(config.seed),
        "train_fraction": repr(config.train_fraction),
        "alpha": repr(config.alpha),
        "n_train": str(len(train)),
        "n_validation": str(len(validation)),
        "structure": structure_source,
    }
    trained = fit_parameters(structure, variables, train, config.alpha, metadata)
    report = evaluate(trained, validation, metadata)
    return trained, report
