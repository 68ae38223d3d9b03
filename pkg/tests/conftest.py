import numpy as np
import pytest

from profilernet import Dataset, VariableDef, make_network
from profilernet.fixtures import profiling_fixture, three_node_demo


@pytest.fixture(scope="session")
def demo_net():
    return three_node_demo()


@pytest.fixture(scope="session")
def fixture_net():
    return profiling_fixture()


def random_network(rng: np.random.Generator, n_nodes: int, edge_prob: float = 0.4,
                   n_states: int = 2, max_parents: int | None = None):
    """Random DAG over binary (or n-state) variables with Dirichlet CPT rows.

    Edges only point from earlier to later ids, so the graph is a DAG by
    construction.
    """
    ids = [f"v{i}" for i in range(n_nodes)]
    variables = [
        VariableDef(v, states=tuple(f"s{k + 1}" for k in range(n_states)))
        for v in ids
    ]
    parents: dict[str, list[str]] = {v: [] for v in ids}
    edges = []
    for j in range(n_nodes):
        for i in range(j):
            if rng.random() < edge_prob:
                if max_parents is not None and len(parents[ids[j]]) >= max_parents:
                    continue
                parents[ids[j]].append(ids[i])
                edges.append((ids[i], ids[j]))
    cpts = {}
    for v in ids:
        n_configs = n_states ** len(parents[v])
        rows = rng.dirichlet(np.full(n_states, 2.0), size=n_configs)
        cpts[v] = (tuple(parents[v]), rows)
    return make_network(variables, edges, cpts, {"name": "random"})


def complete_dataset(net, codes) -> Dataset:
    return Dataset(net.var_ids, np.asarray(codes, dtype=np.int16))
