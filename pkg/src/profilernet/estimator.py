"""scikit-learn compatible estimator over the network toolkit.

``NetworkProfiler`` treats a matrix of complete solved cases as training
data (one column per variable, cells are 0-based state indices), learns the
network, and predicts the output-role variables of new partially-observed
cases. Missing cells in prediction input are ``-1`` (integer arrays) or NaN
(float arrays).

The class follows the scikit-learn estimator contract: all constructor
arguments are stored untouched, ``get_params`` / ``set_params`` work, and
``clone`` produces an unfitted copy, so it composes with model-selection
utilities that only need fit / predict / score.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .cases import Dataset, MISSING
from .inference import posterior_ve
from .learning import (
    DEFAULT_SEED,
    StructureSearchConfig,
    fit_parameters,
    learn_structure,
)
from .model import NetworkStructure, VariableDef
from .profiling import evaluate
from .sampling import SampleSeed, simulate_dataset


def _as_codes(X, n_vars: int, allow_missing: bool) -> np.ndarray:
    """Validate a case matrix and return int16 codes with MISSING = -1."""
    if isinstance(X, Dataset):
        return X.codes
    arr = np.asarray(X)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D case matrix, got shape {arr.shape}")
    if arr.shape[1] != n_vars:
        raise ValueError(f"expected {n_vars} columns, got {arr.shape[1]}")
    if arr.dtype.kind == "f":
        codes = np.where(np.isnan(arr), MISSING, arr).astype(np.int16)
    elif arr.dtype.kind in "iu":
        codes = arr.astype(np.int16)
    else:
        raise ValueError(f"case matrix must be numeric, got dtype {arr.dtype}")
    if not allow_missing and (codes == MISSING).any():
        raise ValueError("training cases must be complete (no -1 / NaN cells)")
    return codes


class NetworkProfiler(BaseEstimator):
    """Learn a discrete network from solved cases; predict output variables.

    Parameters
    ----------
    variables : sequence of VariableDef, optional
        Variable catalog (ids, states, roles). When omitted, binary
        variables ``x0 .. x{k-1}`` with states ``("s1", "s2")`` are assumed
        and ``output_vars`` must name the prediction targets by id or column
        index.
    structure : NetworkStructure or iterable of (parent, child), optional
        Fixed structure to fit parameters on. Ignored when
        ``learn_structure`` is true, except as the search starting point.
    learn_structure : bool
        Run hill-climbing structure search on the training data.
    alpha : float
        Dirichlet smoothing pseudo-count (0 = maximum likelihood).
    max_parents, restarts, tier_constraint, seed
        Structure-search controls; ``seed`` also drives ``sample``.
    output_vars : sequence of str or int, optional
        Overrides which variables are prediction targets.
    """

    def __init__(self, variables=None, structure=None, learn_structure=False,
                 alpha=1.0, max_parents=3, restarts=3, tier_constraint=False,
                 seed=DEFAULT_SEED, output_vars=None):
        self.variables = variables
        self.structure = structure
        self.learn_structure = learn_structure
        self.alpha = alpha
        self.max_parents = max_parents
        self.restarts = restarts
        self.tier_constraint = tier_constraint
        self.seed = seed
        self.output_vars = output_vars

    # -- fitting ----------------------------------------------------------

    def _build_variables(self, X) -> tuple[VariableDef, ...]:
        if self.variables is not None:
            return tuple(self.variables)
        n_vars = np.asarray(X).shape[1]
        out = self._output_id_set(tuple(f"x{j}" for j in range(n_vars)))
        return tuple(
            VariableDef(
                f"x{j}",
                states=("s1", "s2"),
                role="output" if f"x{j}" in out else "input",
            )
            for j in range(n_vars)
        )

    def _output_id_set(self, ids: tuple[str, ...]) -> set[str]:
        if self.output_vars is None:
            return set()
        out = set()
        for item in self.output_vars:
            if isinstance(item, (int, np.integer)):
                out.add(ids[int(item)])
            else:
                out.add(str(item))
        return out

    def fit(self, X, y=None):
        """Learn structure (optionally) and parameters from complete cases."""
        variables = self._build_variables(X)
        ids = tuple(v.id for v in variables)
        if self.output_vars is not None and self.variables is not None:
            wanted = self._output_id_set(ids)
            variables = tuple(
                VariableDef(v.id, v.display_name, v.category,
                            "output" if v.id in wanted else ("input" if v.role == "output" else v.role),
                            v.states)
                for v in variables
            )
        codes = _as_codes(X, len(variables), allow_missing=False)
        data = Dataset(ids, codes)

        if self.learn_structure:
            cfg = StructureSearchConfig(
                max_parents=self.max_parents,
                restarts=self.restarts,
                tier_constraint=self.tier_constraint,
                seed=self.seed,
                initial_edges=self._initial_edges(),
            )
            structure = learn_structure(data, variables, cfg)
        else:
            structure = self._fixed_structure(ids)

        self.network_ = fit_parameters(
            structure, variables, data, self.alpha,
            {"name": "network-profiler", "version": "trained", "seed": str(self.seed)},
        )
        self.variables_ = variables
        self.output_variables_ = self.network_.output_ids
        self.n_features_in_ = len(variables)
        return self

    def _initial_edges(self):
        if self.structure is None:
            return None
        if isinstance(self.structure, NetworkStructure):
            return self.structure.edges
        return tuple(self.structure)

    def _fixed_structure(self, ids: tuple[str, ...]) -> NetworkStructure:
        if self.structure is None:
            return NetworkStructure(ids, ())
        if isinstance(self.structure, NetworkStructure):
            return self.structure
        return NetworkStructure(ids, tuple(self.structure))

    # -- prediction -------------------------------------------------------

    def _evidence_rows(self, X):
        check_is_fitted(self, "network_")
        codes = _as_codes(X, self.n_features_in_, allow_missing=True)
        ids = self.network_.var_ids
        outputs = set(self.output_variables_)
        for row in codes:
            yield {
                var_id: int(code)
                for var_id, code in zip(ids, row)
                if code != MISSING and var_id not in outputs
            }

    def predict_proba(self, X) -> list[np.ndarray]:
        """Posterior of every output variable: one (n_cases, n_states)
        array per output variable, in ``output_variables_`` order."""
        rows = list(self._evidence_rows(X))
        out = [
            np.empty((len(rows), self.network_.cardinality(var_id)))
            for var_id in self.output_variables_
        ]
        for i, evidence in enumerate(rows):
            for k, var_id in enumerate(self.output_variables_):
                out[k][i] = posterior_ve(self.network_, evidence, var_id).probs
        return out

    def predict(self, X) -> np.ndarray:
        """Argmax state index per output variable; shape (n_cases, n_outputs)."""
        probas = self.predict_proba(X)
        cols = [p.argmax(axis=1) for p in probas]
        return np.column_stack(cols) if cols else np.empty((len(np.asarray(X)), 0), dtype=int)

    def sample(self, n: int, seed: int | None = None) -> np.ndarray:
        """Simulate complete cases from the fitted network as a code matrix."""
        check_is_fitted(self, "network_")
        data = simulate_dataset(self.network_, n, SampleSeed(self.seed if seed is None else seed))
        return np.asarray(data.codes, dtype=int)

    def score(self, X, y=None) -> float:
        """Macro-average prediction accuracy over complete cases in X."""
        check_is_fitted(self, "network_")
        codes = _as_codes(X, self.n_features_in_, allow_missing=False)
        report = evaluate(self.network_, Dataset(self.network_.var_ids, codes))
        return report.macro_accuracy

    def evaluation_report(self, X):
        """Full per-variable evaluation of complete cases in X."""
        check_is_fitted(self, "network_")
        codes = _as_codes(X, self.n_features_in_, allow_missing=False)
        return evaluate(self.network_, Dataset(self.network_.var_ids, codes))
