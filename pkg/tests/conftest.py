import random
from itertools import combinations

import pytest
from hypothesis import strategies as st

from hypercolor.hypergraph import Hypergraph


def h0() -> Hypergraph:
    # edges {1,2,3}, {1,2,4}, {3,4,5} in 1-based numbering
    return Hypergraph.from_edges(5, 3, [(0, 1, 2), (0, 1, 3), (2, 3, 4)])


@pytest.fixture
def H0():
    return h0()


def random_hypergraph(rng: random.Random, n: int, k: int = 3, p: float = 0.3) -> Hypergraph:
    return Hypergraph.from_edges(n, k, [t for t in combinations(range(n), k) if rng.random() < p])


@st.composite
def small_hypergraphs(draw, n_min=3, n_max=12, k=3):
    n = draw(st.integers(n_min, n_max))
    allt = list(combinations(range(n), k))
    mask = draw(st.lists(st.booleans(), min_size=len(allt), max_size=len(allt)))
    return Hypergraph.from_edges(n, k, [t for t, keep in zip(allt, mask) if keep])


@st.composite
def hypergraph_and_subset(draw, n_max=12):
    H = draw(small_hypergraphs(n_max=n_max))
    S = draw(st.sets(st.integers(0, H.n - 1)))
    return H, S
