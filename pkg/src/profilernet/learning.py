"""Learning a network from complete solved cases.

Parameters come from smoothed relative frequencies:
``P(state j | config) = (N_j + alpha) / (N + alpha * r)``, with alpha = 0
giving pure maximum likelihood and a uniform row for parent configurations
never seen in the data. Counts are kept as integers so that incremental
accumulation is exactly the same as batch counting.

Structure search is greedy hill climbing over add / remove / reverse
single-edge moves, scored by BIC, with random restarts. The score
decomposes per family (variable + its parents), so each move only rescores
the one or two families it touches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .cases import Dataset, MISSING
from .errors import CaseDataError
from .model import Network, NetworkStructure, VariableDef, make_network
from .rng import UniformStream, mix_seed

DEFAULT_SEED = 1729
SCORE_EPS = 1e-9


# ---------------------------------------------------------------------------
# Dataset split
# ---------------------------------------------------------------------------

def split_dataset(dataset: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Random disjoint, exhaustive partition into (training, validation).

    ``|T| = floor(train_fraction * |D| + 0.5)`` (round half up). Case order
    within each side follows the original dataset.
    """
    n = len(dataset)
    if n == 0:
        raise ValueError("cannot split an empty dataset")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n_train = int(math.floor(train_fraction * n + 0.5))
    perm = UniformStream(mix_seed(seed, 0)).permutation(n)
    train_idx = sorted(perm[:n_train])
    val_idx = sorted(perm[n_train:])
    return dataset.take(train_idx), dataset.take(val_idx)


# ---------------------------------------------------------------------------
# Sufficient counts and parameter fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SufficientCounts:
    """Per-variable, per-parent-configuration state counts.

    The persistent state behind incremental training: accumulating counts
    over extra cases and refitting is exactly equivalent to refitting from
    the concatenated data.
    """

    structure: NetworkStructure
    variables: tuple[VariableDef, ...]
    parent_ids: dict[str, tuple[str, ...]]
    counts: dict[str, np.ndarray]
    n_cases: int
    alpha: float

    def count_matrix(self, var_id: str) -> np.ndarray:
        return self.counts[var_id]


def _check_complete(dataset: Dataset, variables: Sequence[VariableDef]) -> None:
    cards = {v.id: v.n_states for v in variables}
    for v in variables:
        if v.id not in dataset.variables:
            raise CaseDataError(f"dataset lacks a column for variable '{v.id}'")
    for var_id, card in cards.items():
        col = dataset.column(var_id)
        bad = np.nonzero((col < 0) | (col >= card))[0]
        if bad.size:
            i = int(bad[0])
            val = int(col[i])
            what = "missing value" if val == MISSING else f"state {val}"
            raise CaseDataError(
                f"case {i + 1}: {what} out of range for variable '{var_id}' ({card} states)"
            )


def _family_counts(dataset: Dataset, child: str, parents: Sequence[str],
                   cards: Mapping[str, int]) -> np.ndarray:
    r = cards[child]
    n_configs = 1
    idx = np.zeros(len(dataset), dtype=np.int64)
    for pid in parents:
        idx = idx * cards[pid] + dataset.column(pid)
        n_configs *= cards[pid]
    flat = idx * r + dataset.column(child)
    return np.bincount(flat, minlength=n_configs * r).reshape(n_configs, r)


def collect_counts(structure: NetworkStructure, variables: Sequence[VariableDef],
                   dataset: Dataset, alpha: float = 1.0) -> SufficientCounts:
    """Count sufficient statistics for every family from complete data."""
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    _check_complete(dataset, variables)
    cards = {v.id: v.n_states for v in variables}
    parent_ids = {v.id: structure.parents_of(v.id) for v in variables}
    counts = {
        v.id: _family_counts(dataset, v.id, parent_ids[v.id], cards)
        for v in variables
    }
    return SufficientCounts(structure, tuple(variables), parent_ids, counts,
                            len(dataset), alpha)


def incremental_update(counts: SufficientCounts, new_cases: Dataset) -> SufficientCounts:
    """Fold additional solved cases into existing counts.

    The structure must be unchanged; counts add, so batch and incremental
    training coincide exactly.
    """
    fresh = collect_counts(counts.structure, counts.variables, new_cases, counts.alpha)
    merged = {var_id: counts.counts[var_id] + fresh.counts[var_id] for var_id in counts.counts}
    return replace(counts, counts=merged, n_cases=counts.n_cases + len(new_cases))


def counts_to_network(counts: SufficientCounts,
                      metadata: Mapping[str, str] | None = None) -> Network:
    """Turn accumulated counts into a network with smoothed CPT rows."""
    alpha = counts.alpha
    cpts = {}
    for v in counts.variables:
        mat = counts.counts[v.id].astype(np.float64)
        r = v.n_states
        totals = mat.sum(axis=1, keepdims=True)
        rows = np.empty_like(mat)
        if alpha > 0:
            rows = (mat + alpha) / (totals + alpha * r)
        else:
            unseen = totals[:, 0] == 0
            safe = np.where(unseen[:, None], 1.0, totals)
            rows = mat / safe
            rows[unseen] = 1.0 / r
        cpts[v.id] = (counts.parent_ids[v.id], rows)
    return make_network(counts.variables, counts.structure.edges, cpts, metadata)


def fit_parameters(structure: NetworkStructure, variables: Sequence[VariableDef],
                   dataset: Dataset, alpha: float = 1.0,
                   metadata: Mapping[str, str] | None = None) -> Network:
    """Estimate all CPTs from complete data on a fixed structure."""
    counts = collect_counts(structure, variables, dataset, alpha)
    return counts_to_network(counts, metadata)


# ---------------------------------------------------------------------------
# BIC scoring
# ---------------------------------------------------------------------------

def _family_bic(dataset: Dataset, child: str, parents: tuple[str, ...],
                cards: Mapping[str, int]) -> float:
    mat = _family_counts(dataset, child, parents, cards)
    n = len(dataset)
    totals = np.broadcast_to(mat.sum(axis=1, keepdims=True), mat.shape)
    nz = mat > 0
    ll = float((mat[nz] * np.log(mat[nz] / totals[nz])).sum())
    k = (cards[child] - 1) * mat.shape[0]
    return ll - 0.5 * k * math.log(n)


def bic_family_scores(structure: NetworkStructure, variables: Sequence[VariableDef],
                      dataset: Dataset) -> dict[str, float]:
    """Per-family BIC terms; their sum is bic_score."""
    if len(dataset) == 0:
        raise ValueError("cannot score an empty dataset")
    _check_complete(dataset, variables)
    cards = {v.id: v.n_states for v in variables}
    return {
        v.id: _family_bic(dataset, v.id, structure.parents_of(v.id), cards)
        for v in variables
    }


def bic_score(structure: NetworkStructure, variables: Sequence[VariableDef],
              dataset: Dataset) -> float:
    """BIC of the structure on complete data: max log-likelihood minus
    ``(k / 2) ln n`` over the k free parameters."""
    return sum(bic_family_scores(structure, variables, dataset).values())


# ---------------------------------------------------------------------------
# Structure search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureSearchConfig:
    """Hill-climbing controls.

    ``tier_constraint`` forbids edges from input-role variables into
    output-role variables (offender traits may drive scene evidence, never
    the reverse); enable it for profiling networks.
    """

    max_parents: int = 3
    restarts: int = 3
    tier_constraint: bool = False
    seed: int = DEFAULT_SEED
    initial_edges: tuple[tuple[str, str], ...] | None = None

    def __post_init__(self):
        if self.max_parents < 0:
            raise ValueError("max_parents must be >= 0")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


class _HillClimber:
    def __init__(self, dataset: Dataset, variables: Sequence[VariableDef],
                 cfg: StructureSearchConfig):
        self.dataset = dataset
        self.variables = tuple(variables)
        self.ids = [v.id for v in variables]
        self.cards = {v.id: v.n_states for v in variables}
        self.roles = {v.id: v.role for v in variables}
        self.cfg = cfg
        self._cache: dict[tuple[str, frozenset], float] = {}

    def family_score(self, child: str, parents: frozenset) -> float:
        key = (child, parents)
        if key not in self._cache:
            ordered = tuple(p for p in self.ids if p in parents)
            self._cache[key] = _family_bic(self.dataset, child, ordered, self.cards)
        return self._cache[key]

    def edge_allowed(self, parent: str, child: str) -> bool:
        if self.cfg.tier_constraint:
            if self.roles[parent] == "input" and self.roles[child] == "output":
                return False
        return True

    def _has_path(self, parents: dict[str, set], src: str, dst: str) -> bool:
        # True if dst is reachable from src along child edges.
        children: dict[str, list[str]] = {v: [] for v in self.ids}
        for c, ps in parents.items():
            for p in ps:
                children[p].append(c)
        stack, seen = [src], set()
        while stack:
            node = stack.pop()
            if node == dst:
                return True
            for c in children[node]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return False

    def climb(self, start: dict[str, set]) -> tuple[dict[str, set], float]:
        parents = {v: set(ps) for v, ps in start.items()}
        score = {v: self.family_score(v, frozenset(parents[v])) for v in self.ids}
        while True:
            best_delta, best_apply = SCORE_EPS, None
            for child in self.ids:
                for parent in self.ids:
                    if parent == child:
                        continue
                    if parent in parents[child]:
                        delta, apply = self._try_remove_or_reverse(parents, score, parent, child)
                    else:
                        delta, apply = self._try_add(parents, score, parent, child)
                    if delta > best_delta:
                        best_delta, best_apply = delta, apply
            if best_apply is None:
                return parents, sum(score.values())
            best_apply()

    def _try_add(self, parents, score, parent, child):
        if (
            len(parents[child]) >= self.cfg.max_parents
            or not self.edge_allowed(parent, child)
            or self._has_path(parents, child, parent)
        ):
            return -math.inf, None
        new = self.family_score(child, frozenset(parents[child] | {parent}))
        delta = new - score[child]

        def apply():
            parents[child].add(parent)
            score[child] = new

        return delta, apply

    def _try_remove_or_reverse(self, parents, score, parent, child):
        removed = frozenset(parents[child] - {parent})
        child_new = self.family_score(child, removed)
        best_delta = child_new - score[child]

        def apply_remove():
            parents[child].discard(parent)
            score[child] = child_new

        best_apply = apply_remove

        # Reverse: drop parent->child, add child->parent.
        if (
            len(parents[parent]) < self.cfg.max_parents
            and self.edge_allowed(child, parent)
        ):
            trial = {v: set(ps) for v, ps in parents.items()}
            trial[child].discard(parent)
            if not self._has_path(trial, parent, child):
                parent_new = self.family_score(parent, frozenset(parents[parent] | {child}))
                delta = (child_new - score[child]) + (parent_new - score[parent])
                if delta > best_delta:
                    best_delta = delta

                    def apply_reverse():
                        parents[child].discard(parent)
                        parents[parent].add(child)
                        score[child] = child_new
                        score[parent] = parent_new

                    best_apply = apply_reverse
        return best_delta, best_apply

    def random_start(self, stream: UniformStream) -> dict[str, set]:
        order = [self.ids[i] for i in stream.permutation(len(self.ids))]
        parents: dict[str, set] = {v: set() for v in self.ids}
        for pos, child in enumerate(order):
            candidates = [p for p in order[:pos] if self.edge_allowed(p, child)]
            stream.shuffle(candidates)
            for p in candidates[: self.cfg.max_parents]:
                if stream.next_float() < 0.5:
                    parents[child].add(p)
        return parents


def learn_structure(dataset: Dataset, variables: Sequence[VariableDef],
                    cfg: StructureSearchConfig | None = None) -> NetworkStructure:
    """Best structure over hill-climbing restarts.

    Restart 0 starts from ``cfg.initial_edges`` (the hypothesis structure)
    or the empty graph; later restarts start from random DAGs. The result
    respects acyclicity, ``max_parents``, and the tier constraint, and never
    scores below its own starting structure.
    """
    cfg = cfg or StructureSearchConfig()
    variables = tuple(variables)
    ids = [v.id for v in variables]
    if len(variables) < 1:
        raise ValueError("need at least one variable")
    if len(variables) == 1:
        return NetworkStructure((ids[0],), ())
    _check_complete(dataset, variables)

    climber = _HillClimber(dataset, variables, cfg)
    best_parents, best_score = None, -math.inf
    for restart in range(cfg.restarts):
        if restart == 0:
            start: dict[str, set] = {v: set() for v in ids}
            for p, c in cfg.initial_edges or ():
                start[c].add(p)
        else:
            start = climber.random_start(UniformStream(mix_seed(cfg.seed, restart)))
        parents, score = climber.climb(start)
        if score > best_score + SCORE_EPS:
            best_parents, best_score = parents, score

    decl = {v: i for i, v in enumerate(ids)}
    edges = sorted(
        ((p, c) for c in ids for p in best_parents[c]),
        key=lambda e: (decl[e[0]], decl[e[1]]),
    )
    return NetworkStructure(tuple(ids), tuple(edges))


# ---------------------------------------------------------------------------
# Markov equivalence
# ---------------------------------------------------------------------------

def skeleton(structure: NetworkStructure) -> frozenset[frozenset]:
    """Undirected edge set."""
    return frozenset(frozenset(e) for e in structure.edges)


def v_structures(structure: NetworkStructure) -> frozenset[tuple[str, str, str]]:
    """Unshielded colliders a -> c <- b (a, b non-adjacent), canonical order."""
    adj = skeleton(structure)
    out = set()
    for c in structure.nodes:
        ps = structure.parents_of(c)
        for i, a in enumerate(ps):
            for b in ps[i + 1:]:
                if frozenset((a, b)) not in adj:
                    out.add((min(a, b), c, max(a, b)))
    return frozenset(out)


def same_markov_equivalence_class(a: NetworkStructure, b: NetworkStructure) -> bool:
    """Same skeleton and same v-structures: the finest structural identity
    recoverable from observational data."""
    return skeleton(a) == skeleton(b) and v_structures(a) == v_structures(b)
