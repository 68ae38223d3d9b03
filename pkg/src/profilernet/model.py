"""Network data model: discrete variables, DAG structure, and CPTs.

Conventions fixed here and relied on everywhere else:

- State indices are 0-based internally. File formats and user-facing output
  number states from 1.
- A CPT is a matrix with one row per parent configuration and one column per
  state. Rows are ordered mixed-radix over the parent states with the
  *last-declared parent varying fastest*, i.e. row index =
  ``(((s_1) * r_2 + s_2) * r_3 + s_3) ...`` for parent states ``s_j``.
- Row sums must be 1 within ``ROW_SUM_TOL``. Loaders may renormalize rows
  whose sum is off by at most ``ROW_SUM_RENORM_TOL`` (see fileio).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CycleError, InvalidNetworkError

ROW_SUM_TOL = 1e-9
ROW_SUM_RENORM_TOL = 1e-6

CATEGORIES = ("CSA", "VA", "FA", "OFF", "OTHER")
ROLES = ("input", "output", "latent")


@dataclass(frozen=True)
class VariableDef:
    """One discrete variable: identity, taxonomy, and its ordered states.

    ``role`` drives the profiling pipeline: ``input`` variables are the
    observable crime-scene evidence, ``output`` variables form the predicted
    profile, ``latent`` variables are neither evidenced nor scored.
    """

    id: str
    display_name: str = ""
    category: str = "OTHER"
    role: str = "latent"
    states: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if not self.display_name:
            object.__setattr__(self, "display_name", self.id)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state_index(self, label: str) -> int:
        try:
            return self.states.index(label)
        except ValueError:
            raise KeyError(f"variable '{self.id}' has no state '{label}'") from None


@dataclass(frozen=True)
class NetworkStructure:
    """Directed graph over variable ids. Acyclicity is checked by
    validate_network / topological_order, not by the constructor."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple((p, c) for p, c in self.edges))

    def parents_of(self, node: str) -> tuple[str, ...]:
        return tuple(p for p, c in self.edges if c == node)

    def children_of(self, node: str) -> tuple[str, ...]:
        return tuple(c for p, c in self.edges if p == node)


@dataclass(frozen=True, eq=False)
class Cpt:
    """Conditional probability table for one variable.

    ``rows`` has shape ``(prod(parent_cards), n_states)``; ``parent_cards``
    carries the state count of each parent so that row indexing is
    self-contained.
    """

    variable_id: str
    parent_ids: tuple[str, ...]
    parent_cards: tuple[int, ...]
    rows: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "parent_ids", tuple(self.parent_ids))
        object.__setattr__(self, "parent_cards", tuple(int(c) for c in self.parent_cards))
        rows = np.array(self.rows, dtype=np.float64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n_configs(self) -> int:
        n = 1
        for c in self.parent_cards:
            n *= c
        return n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cpt):
            return NotImplemented
        return (
            self.variable_id == other.variable_id
            and self.parent_ids == other.parent_ids
            and self.parent_cards == other.parent_cards
            and self.rows.shape == other.rows.shape
            and bool(np.array_equal(self.rows, other.rows))
        )


@dataclass(frozen=True, eq=False)
class Network:
    """Immutable network: variables + structure + one CPT per variable.

    ``metadata`` is free-form provenance (name, version, training seed, ...).
    Instances are safe to share across threads; all operations on them are
    pure functions.
    """

    variables: tuple[VariableDef, ...]
    structure: NetworkStructure
    cpts: tuple[Cpt, ...]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "cpts", tuple(self.cpts))
        object.__setattr__(self, "metadata", dict(self.metadata))
        object.__setattr__(self, "_by_id", {v.id: v for v in self.variables})
        object.__setattr__(self, "_cpt_by_id", {c.variable_id: c for c in self.cpts})

    @property
    def var_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables)

    def variable(self, var_id: str) -> VariableDef:
        try:
            return self._by_id[var_id]
        except KeyError:
            raise KeyError(f"unknown variable '{var_id}'") from None

    def cpt(self, var_id: str) -> Cpt:
        try:
            return self._cpt_by_id[var_id]
        except KeyError:
            raise KeyError(f"no CPT for variable '{var_id}'") from None

    def cardinality(self, var_id: str) -> int:
        return self.variable(var_id).n_states

    @property
    def input_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables if v.role == "input")

    @property
    def output_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables if v.role == "output")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.structure == other.structure
            and self.cpts == other.cpts
            and self.metadata == other.metadata
        )


@dataclass(frozen=True)
class Violation:
    """One violated invariant, identified by a stable code and the
    offending variable / edge."""

    code: str
    subject: str
    message: str


def validate_network(net: Network) -> list[Violation]:
    """Check every structural and probabilistic invariant.

    Returns the full list of violations (empty for a valid network);
    violations are data, not exceptions, so that partially-broken networks
    can be inspected.
    """
    out: list[Violation] = []

    seen_ids: set[str] = set()
    for v in net.variables:
        if not v.id or any(ch.isspace() for ch in v.id):
            out.append(Violation("bad_id", v.id, f"variable id '{v.id}' is empty or contains whitespace"))
        if v.id in seen_ids:
            out.append(Violation("duplicate_variable", v.id, f"variable id '{v.id}' declared more than once"))
        seen_ids.add(v.id)
        if v.n_states < 2:
            out.append(Violation("too_few_states", v.id, f"variable '{v.id}' has {v.n_states} states, needs >= 2"))
        if len(set(v.states)) != len(v.states):
            out.append(Violation("duplicate_state", v.id, f"variable '{v.id}' repeats a state label"))
        if v.category not in CATEGORIES:
            out.append(Violation("bad_category", v.id, f"variable '{v.id}' has unknown category '{v.category}'"))
        if v.role not in ROLES:
            out.append(Violation("bad_role", v.id, f"variable '{v.id}' has unknown role '{v.role}'"))

    declared = set(net.var_ids)
    if set(net.structure.nodes) != declared:
        missing = declared - set(net.structure.nodes)
        extra = set(net.structure.nodes) - declared
        out.append(Violation(
            "node_mismatch", ",".join(sorted(missing | extra)),
            f"structure nodes disagree with declared variables (missing={sorted(missing)}, undeclared={sorted(extra)})",
        ))

    seen_edges: set[tuple[str, str]] = set()
    clean_edges = []
    for p, c in net.structure.edges:
        label = f"{p}->{c}"
        if p == c:
            out.append(Violation("self_loop", label, f"self-loop on '{p}'"))
            continue
        if p not in declared or c not in declared:
            out.append(Violation("unknown_endpoint", label, f"edge {label} references an undeclared variable"))
            continue
        if (p, c) in seen_edges:
            out.append(Violation("duplicate_edge", label, f"edge {label} declared more than once"))
            continue
        seen_edges.add((p, c))
        clean_edges.append((p, c))

    try:
        topological_order(NetworkStructure(net.var_ids, tuple(clean_edges)))
    except CycleError as exc:
        out.append(Violation("cycle", str(exc), f"graph is cyclic: {exc}"))

    cpt_ids = [c.variable_id for c in net.cpts]
    for var_id in declared - set(cpt_ids):
        out.append(Violation("missing_cpt", var_id, f"no CPT for variable '{var_id}'"))
    for var_id in set(cpt_ids) - declared:
        out.append(Violation("extra_cpt", var_id, f"CPT for undeclared variable '{var_id}'"))
    if len(set(cpt_ids)) != len(cpt_ids):
        out.append(Violation("duplicate_cpt", "", "more than one CPT for the same variable"))

    for cpt in net.cpts:
        if cpt.variable_id not in declared:
            continue
        var = net.variable(cpt.variable_id)
        in_edges = {p for p, c in clean_edges if c == cpt.variable_id}
        if set(cpt.parent_ids) != in_edges:
            out.append(Violation(
                "parent_mismatch", cpt.variable_id,
                f"CPT parents {list(cpt.parent_ids)} do not match in-edges {sorted(in_edges)} of '{cpt.variable_id}'",
            ))
            continue
        cards_ok = True
        for pid, card in zip(cpt.parent_ids, cpt.parent_cards):
            if pid in declared and net.cardinality(pid) != card:
                out.append(Violation(
                    "parent_card_mismatch", cpt.variable_id,
                    f"CPT of '{cpt.variable_id}' declares {card} states for parent '{pid}', variable has {net.cardinality(pid)}",
                ))
                cards_ok = False
        if not cards_ok:
            continue
        expected_shape = (cpt.n_configs, var.n_states)
        if cpt.rows.shape != expected_shape:
            out.append(Violation(
                "row_shape", cpt.variable_id,
                f"CPT of '{cpt.variable_id}' has shape {cpt.rows.shape}, expected {expected_shape}",
            ))
            continue
        if np.any(cpt.rows < 0.0) or np.any(cpt.rows > 1.0) or not np.all(np.isfinite(cpt.rows)):
            out.append(Violation("prob_range", cpt.variable_id,
                                 f"CPT of '{cpt.variable_id}' has entries outside [0, 1]"))
        sums = cpt.rows.sum(axis=1)
        for i in np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)[0]:
            out.append(Violation(
                "row_sum", f"{cpt.variable_id}[{i}]",
                f"CPT row {i + 1} of '{cpt.variable_id}' sums to {sums[i]:.12g}, expected 1",
            ))

    return out


def assert_valid(net: Network) -> Network:
    """Raise InvalidNetworkError unless the network passes validation."""
    violations = validate_network(net)
    if violations:
        raise InvalidNetworkError(violations)
    return net


def topological_order(structure: NetworkStructure) -> list[str]:
    """Parents-first ordering of the nodes, ties broken by declaration order.

    Raises CycleError naming one offending cycle if the graph is not a DAG.
    """
    index = {n: i for i, n in enumerate(structure.nodes)}
    indeg = {n: 0 for n in structure.nodes}
    children: dict[str, list[str]] = {n: [] for n in structure.nodes}
    for p, c in structure.edges:
        if p not in index:
            raise KeyError(f"edge references undeclared node '{p}'")
        if c not in index:
            raise KeyError(f"edge references undeclared node '{c}'")
        indeg[c] += 1
        children[p].append(c)

    ready = [index[n] for n in structure.nodes if indeg[n] == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        n = structure.nodes[heapq.heappop(ready)]
        order.append(n)
        for c in children[n]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(ready, index[c])

    if len(order) != len(structure.nodes):
        remaining = {n for n in structure.nodes if n not in set(order)}
        raise CycleError(" -> ".join(_find_cycle(structure, remaining)))
    return order


def _find_cycle(structure: NetworkStructure, remaining: set[str]) -> list[str]:
    # Every remaining node has an in-edge from another remaining node, so
    # walking parents must revisit a node.
    parents: dict[str, list[str]] = {n: [] for n in remaining}
    for p, c in structure.edges:
        if p in remaining and c in remaining:
            parents[c].append(p)
    node = next(iter(sorted(remaining)))
    path = [node]
    seen = {node}
    while True:
        node = parents[node][0]
        if node in seen:
            cycle = path[path.index(node):] + [node]
            return list(reversed(cycle))
        seen.add(node)
        path.append(node)


def parent_config_index(cpt: Cpt, assignment: Mapping[str, int]) -> int:
    """Row index of the parent configuration in ``assignment``.

    Mixed-radix, last-declared parent varying fastest. The assignment must
    cover every parent with an in-range state index.
    """
    idx = 0
    for pid, card in zip(cpt.parent_ids, cpt.parent_cards):
        if pid not in assignment:
            raise KeyError(f"assignment misses parent '{pid}' of '{cpt.variable_id}'")
        s = assignment[pid]
        if not 0 <= s < card:
            raise IndexError(f"state {s} out of range for parent '{pid}' ({card} states)")
        idx = idx * card + s
    return idx


def parent_config_from_index(cpt: Cpt, row_index: int) -> dict[str, int]:
    """Inverse of parent_config_index."""
    if not 0 <= row_index < cpt.n_configs:
        raise IndexError(f"row index {row_index} out of range for '{cpt.variable_id}'")
    out: dict[str, int] = {}
    rem = row_index
    for pid, card in zip(reversed(cpt.parent_ids), reversed(cpt.parent_cards)):
        out[pid] = rem % card
        rem //= card
    return {pid: out[pid] for pid in cpt.parent_ids}


def make_network(
    variables: Sequence[VariableDef],
    edges: Iterable[tuple[str, str]],
    cpts: Mapping[str, tuple[Sequence[str], np.ndarray]],
    metadata: Mapping[str, str] | None = None,
) -> Network:
    """Assemble and validate a Network.

    ``cpts`` maps variable id to ``(parent_ids, rows)``; parent cardinalities
    are filled in from the variable definitions.
    """
    by_id = {v.id: v for v in variables}
    built = []
    for v in variables:
        if v.id not in cpts:
            raise KeyError(f"no CPT given for variable '{v.id}'")
        parent_ids, rows = cpts[v.id]
        cards = tuple(by_id[p].n_states for p in parent_ids)
        built.append(Cpt(v.id, tuple(parent_ids), cards, np.asarray(rows, dtype=np.float64)))
    net = Network(
        variables=tuple(variables),
        structure=NetworkStructure(tuple(v.id for v in variables), tuple(edges)),
        cpts=tuple(built),
        metadata=dict(metadata or {}),
    )
    return assert_valid(net)
