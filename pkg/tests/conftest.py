import itertools

import pytest
from hypothesis import strategies as st

from gridturan.graph import Graph


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, chosen) if keep])


def all_graphs(n):
    """Every labelled graph on n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [e for i, e in enumerate(pairs) if mask >> i & 1])


def naive_contains(G, H):
    """Try every injection; the slowest possible ground truth."""
    for image in itertools.permutations(range(G.n), H.n):
        if all(G.has_edge(image[u], image[v]) for u, v in H.edges):
            return True
    return False


@pytest.fixture
def k6():
    from gridturan.generators import make_complete

    return make_complete(6)
