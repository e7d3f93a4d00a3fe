import random
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_hypergraphs
from hypercolor.engine import Player
from hypercolor.hypergraph import Hypergraph, complete
from hypercolor.solver import (
    BudgetExceeded,
    canonical_key,
    chromatic_number,
    game_chromatic_number,
    solve,
    solve_unmemoized,
)

EDGE3 = Hypergraph.from_edges(3, 3, [(0, 1, 2)])
EMPTY = Hypergraph.from_edges(4, 3, [])
TWO = Hypergraph.from_edges(6, 3, [(0, 1, 2), (3, 4, 5)])


def brute_chromatic(H):
    for q in range(1, H.n + 1):
        for col in product(range(q), repeat=H.n):
            if all(len({col[x] for x in e}) > 1 for e in H.edges):
                return q
    return 0


def test_single_edge():
    assert solve(EDGE3, 1) is Player.B
    assert solve(EDGE3, 2) is Player.A
    assert solve_unmemoized(EDGE3, 1) is Player.B
    assert solve_unmemoized(EDGE3, 2) is Player.A
    assert game_chromatic_number(EDGE3, 4) == 2


def test_edgeless():
    for q in (1, 2, 3):
        assert solve(EMPTY, q) is Player.A
    assert game_chromatic_number(EMPTY, 4) == 1


def test_two_disjoint_edges():
    assert game_chromatic_number(TWO, 4) == 2


def test_exceeds_qmax():
    assert game_chromatic_number(EDGE3, 1) is None


def test_chromatic_number_fixtures():
    assert chromatic_number(EDGE3) == 2
    assert chromatic_number(EMPTY) == 1
    assert chromatic_number(complete(5, 3)) == brute_chromatic(complete(5, 3)) == 3
    assert chromatic_number(Hypergraph.from_edges(0, 3, [])) == 0


def test_canonical_key_ignores_color_names():
    assert canonical_key([{0, 1}, {2}]) == canonical_key([{2}, {1, 0}, set()])


def test_budget_exceeded():
    H = complete(7, 3)
    with pytest.raises(BudgetExceeded):
        solve(H, 3, node_limit=10)
    with pytest.raises(BudgetExceeded):
        solve_unmemoized(H, 3, node_limit=10)


@settings(max_examples=80, deadline=None)
@given(small_hypergraphs(n_max=6), st.integers(1, 3))
def test_memoized_equals_plain_search(H, q):
    assert solve(H, q) == solve_unmemoized(H, q)


@settings(max_examples=60, deadline=None)
@given(small_hypergraphs(n_max=7))
def test_chromatic_matches_brute_force(H):
    if H.n <= 6:
        assert chromatic_number(H) == brute_chromatic(H)


@settings(max_examples=60, deadline=None)
@given(small_hypergraphs(n_max=7))
def test_game_number_at_least_chromatic_and_monotone(H):
    cg = game_chromatic_number(H, 4)  # raises if A wins at q but loses at q + 1
    if cg is not None:
        assert cg >= chromatic_number(H)
    # pigeonhole: enough colors always win
    assert solve(H, H.max_degree() + 1) is Player.A


@settings(max_examples=60, deadline=None)
@given(small_hypergraphs(n_max=7), st.integers(1, 3), st.randoms(use_true_random=False))
def test_solve_ignores_vertex_labels(H, q, rnd):
    perm = list(range(H.n))
    rnd.shuffle(perm)
    H2 = Hypergraph.from_edges(H.n, 3, [tuple(sorted(perm[x] for x in e)) for e in H.edges])
    assert solve(H, q) == solve(H2, q)
