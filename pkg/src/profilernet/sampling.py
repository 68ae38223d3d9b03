"""Feed-forward (ancestral) sampling of complete cases.

Each variable is drawn in topological order from the CPT row selected by its
already-sampled parents: one uniform ``v`` per variable, mapped through the
cumulative bounds of the row. Intervals are half-open, ``state k`` iff
``cum[k-1] <= v < cum[k]`` (first interval ``[0, cum[0])``), so every
``v in [0, 1)`` maps to exactly one state and boundary draws land in the
upper interval.

Case ``i`` of a simulation consumes its own substream seeded by
``mix_seed(master_seed, i)``; simulate_dataset therefore vectorizes across
cases while remaining bit-identical to sampling each case sequentially.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .cases import CaseRecord, Dataset
from .model import Cpt, Network, ROW_SUM_TOL, parent_config_index, topological_order
from .rng import MASK64, UniformStream, advance_uniforms, mix_seed, substream_seeds


@dataclass(frozen=True)
class SampleSeed:
    """Master seed plus the per-case substream derivation rule."""

    master_seed: int

    def __post_init__(self):
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("master_seed must fit in 64 bits")

    def substream(self, case_index: int) -> UniformStream:
        return UniformStream(mix_seed(self.master_seed, case_index))


def cumulative_ranges(probs) -> np.ndarray:
    """Cumulative upper bounds of a probability vector, last forced to 1.0.

    [0.2, 0.5, 0.3] -> [0.2, 0.7, 1.0]
    """
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probability vector must be 1-D and non-empty")
    if not np.all(np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("probabilities must lie in [0, 1]")
    if abs(p.sum() - 1.0) > ROW_SUM_TOL:
        raise ValueError(f"probabilities sum to {p.sum():.12g}, expected 1")
    cum = np.minimum(np.cumsum(p), 1.0)
    cum[-1] = 1.0
    return cum


def draw_state(cumulative, v: float) -> int:
    """Smallest index k with ``v < cumulative[k]``."""
    if not 0.0 <= v < 1.0:
        raise ValueError(f"v must be in [0, 1), got {v}")
    return int(bisect_right(list(np.asarray(cumulative, dtype=np.float64)), v))


def sample_case(net: Network, stream: UniformStream) -> CaseRecord:
    """Draw one complete case, consuming one uniform per variable in
    topological order."""
    values: dict[str, int] = {}
    for var_id in topological_order(net.structure):
        cpt = net.cpt(var_id)
        row = cpt.rows[parent_config_index(cpt, values)]
        values[var_id] = draw_state(cumulative_ranges(row), stream.next_float())
    return CaseRecord(values, complete=True)


def simulate_dataset(net: Network, n: int, seed: SampleSeed) -> Dataset:
    """Simulate ``n`` complete cases; deterministic in ``seed``.

    Vectorized over cases per variable; equals the sequential
    ``sample_case(net, seed.substream(i))`` loop bit for bit because every
    case only ever touches its own substream.
    """
    if n < 0:
        raise ValueError(f"case count must be >= 0, got {n}")
    var_ids = net.var_ids
    if n == 0:
        return Dataset.empty(var_ids)

    order = topological_order(net.structure)
    states = substream_seeds(seed.master_seed, n)
    sampled: dict[str, np.ndarray] = {}
    for var_id in order:
        cpt = net.cpt(var_id)
        states, u = advance_uniforms(states)
        row_idx = _parent_rows(cpt, sampled, n)
        cum = _cumulative_matrix(cpt)
        sampled[var_id] = (u[:, None] >= cum[row_idx]).sum(axis=1).astype(np.int16)

    codes = np.column_stack([sampled[v] for v in var_ids])
    return Dataset(var_ids, codes)


def _parent_rows(cpt: Cpt, sampled: dict[str, np.ndarray], n: int) -> np.ndarray:
    idx = np.zeros(n, dtype=np.int64)
    for pid, card in zip(cpt.parent_ids, cpt.parent_cards):
        idx = idx * card + sampled[pid]
    return idx


def _cumulative_matrix(cpt: Cpt) -> np.ndarray:
    cum = np.minimum(np.cumsum(cpt.rows, axis=1), 1.0)
    cum[:, -1] = 1.0
    return cum
