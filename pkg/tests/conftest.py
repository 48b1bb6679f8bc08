import numpy as np
import pytest

from hde import TprConfig, build_dag, compute_levels


def random_dag(rng, n_nodes, extra_edges=None):
    """Random single-root DAG: a random parent tree plus forward cross-edges."""
    names = [f"n{i}" for i in range(n_nodes)]
    edges = []
    for i in range(1, n_nodes):
        p = int(rng.integers(0, i))
        edges.append((names[p], names[i]))
    if extra_edges is None:
        extra_edges = int(rng.integers(0, n_nodes))
    existing = set(edges)
    for _ in range(extra_edges):
        i = int(rng.integers(1, n_nodes))
        p = int(rng.integers(0, i))
        e = (names[p], names[i])
        if e not in existing:
            existing.add(e)
            edges.append(e)
    return build_dag(edges)


def random_scores(rng, dag, n_rows=1):
    return rng.uniform(0.0, 1.0, size=(n_rows, len(dag)))


@pytest.fixture
def diamond():
    dag = build_dag([("r", "a"), ("r", "b"), ("a", "c"), ("b", "c")])
    return dag, compute_levels(dag)


@pytest.fixture
def skip_edge():
    dag = build_dag([("r", "a"), ("a", "c"), ("r", "c")])
    return dag, compute_levels(dag)


@pytest.fixture
def chain():
    dag = build_dag([("r", "a"), ("a", "b")])
    return dag, compute_levels(dag)


def threshold_config(dag, t=0.5, **kw):
    return TprConfig(thresholds=np.full(len(dag), float(t)), **kw)
