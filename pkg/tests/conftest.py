import io
from pathlib import Path

import numpy as np
import pytest

from fane import build_augmented, load_attributes, load_edge_list
from fane.datasets import ensure_dataset

REPO = Path(__file__).resolve().parent.parent
DATA = REPO / "data"

FIVE_NODE_EDGES = "0 1 2.0\n1 2\n2 3\n3 4\n4 0\n0 2\n"
FIVE_NODE_ATTRS = "1 0\n3 0\n"


@pytest.fixture
def five_node_graph():
    """Cycle 0-1-2-3-4-0 with chord 0-2, weight 2 on (0,1), attr a0 on {1,3}."""
    g = load_edge_list(io.StringIO(FIVE_NODE_EDGES))
    load_attributes(io.StringIO(FIVE_NODE_ATTRS), g)
    return build_augmented(g)


@pytest.fixture(scope="session")
def data_root():
    """Dataset directory; synthesizes the named stand-ins on first use."""
    for name in ("cora", "webkb", "citeseer", "adjnoun"):
        ensure_dataset(name, DATA)
    return DATA


def random_raw_graph(rng: np.random.Generator, n_lo=6, n_hi=14):
    """Random connected weighted attribute-free graph for oracle checks.

    Returns (AugmentedGraph, edge list of (u, v, w)).
    """
    n = int(rng.integers(n_lo, n_hi + 1))
    edges = {}
    order = rng.permutation(n)
    for i in range(1, n):  # random spanning tree keeps every node walkable
        a = int(order[i])
        b = int(order[rng.integers(i)])
        key = (min(a, b), max(a, b))
        edges[key] = round(float(rng.uniform(0.5, 3.0)), 3)
    extra = int(rng.integers(n // 2, n + 1))
    for _ in range(extra):
        a, b = rng.integers(n, size=2)
        if a == b:
            continue
        key = (min(int(a), int(b)), max(int(a), int(b)))
        edges.setdefault(key, round(float(rng.uniform(0.5, 3.0)), 3))
    text = "".join(f"{u} {v} {w!r}\n" for (u, v), w in sorted(edges.items()))
    g = load_edge_list(io.StringIO(text))
    triples = [(g.name_to_id()[str(u)], g.name_to_id()[str(v)], w)
               for (u, v), w in sorted(edges.items())]
    return build_augmented(g), triples
