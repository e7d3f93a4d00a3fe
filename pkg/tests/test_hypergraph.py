import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import hypergraph_and_subset, small_hypergraphs
from hypercolor.hypergraph import (
    Hypergraph,
    HypergraphFormatError,
    _unrank_colex,
    _unrank_colex_exact,
    complete,
    density_stats,
    generate_random,
    parse,
    partial_degree,
    serialize,
    shadow_graph,
)


# ---- brute-force oracles -------------------------------------------------

def brute_density(H, S):
    S = set(S)
    E = set(H.edges)
    e3 = sum(1 for e in E if set(e) <= S)
    e2 = 0
    for x, y in combinations(sorted(S), 2):
        if any(tuple(sorted((x, y, z))) in E for z in range(H.n) if z not in S):
            e2 += 1
    return e3, e2


def brute_partial(H, S, v, j):
    S = set(S)
    return sum(1 for e in H.edges if v in e and sum(1 for x in e if x != v and x in S) == j)


def brute_shadow(H, U):
    U = set(U)
    E = [set(e) for e in H.edges]
    return {
        (x, y)
        for x, y in combinations(sorted(U), 2)
        if any({x, y} <= e for e in E)
    }


# ---- construction ----------------------------------------------------------

def test_from_edges_validates():
    with pytest.raises(ValueError):
        Hypergraph.from_edges(3, 3, [(0, 0, 1)])
    with pytest.raises(ValueError):
        Hypergraph.from_edges(3, 3, [(0, 1, 3)])
    with pytest.raises(ValueError):
        Hypergraph.from_edges(3, 3, [(0, 1, 2), (2, 1, 0)])
    with pytest.raises(ValueError):
        Hypergraph.from_edges(3, 3, [(0, 1)])


def test_incidence_matches_edges(H0):
    for v in range(H0.n):
        assert sorted(H0.incidence[v]) == [i for i, e in enumerate(H0.edges) if v in e]
    assert [H0.degree(v) for v in range(5)] == [2, 2, 2, 2, 1]
    assert H0.max_degree() == 2


# ---- generation --------------------------------------------------------------

def test_generate_zero_density():
    assert generate_random(10, 3, 0, seed=1).m == 0


def test_generate_full_density():
    H = generate_random(6, 3, 36, seed=7)
    assert sorted(H.edges) == list(combinations(range(6), 3))


def test_generate_is_seed_deterministic():
    a = generate_random(200, 3, 15, seed=5)
    b = generate_random(200, 3, 15, seed=5)
    c = generate_random(200, 3, 15, seed=6)
    assert a.edges == b.edges
    assert a.edges != c.edges


def test_generate_rejects_bad_density():
    with pytest.raises(ValueError):
        generate_random(10, 3, -1, seed=0)
    with pytest.raises(ValueError):
        generate_random(10, 3, 101, seed=0)


def test_edge_count_moments():
    n, k, d = 50, 3, 30
    N = math.comb(n, k)
    p = d / n ** (k - 1)
    counts = np.array([generate_random(n, k, d, seed=s).m for s in range(10_000)])
    mean = N * p
    assert mean == pytest.approx(235.2)
    sd = math.sqrt(N * p * (1 - p))
    # sample mean within 3 standard errors, sample variance within 3 of its standard errors
    assert abs(counts.mean() - mean) <= 3 * sd / math.sqrt(len(counts))
    var_se = sd ** 2 * math.sqrt(2 / (len(counts) - 1))
    assert abs(counts.var(ddof=1) - sd ** 2) <= 3 * var_se


def test_subset_inclusion_is_uniform():
    # every triple of a 7-vertex set should appear with frequency p
    n, d = 7, 49 * 0.3
    hits = np.zeros(math.comb(7, 3))
    index = {t: i for i, t in enumerate(combinations(range(n), 3))}
    trials = 4000
    for s in range(trials):
        for e in generate_random(n, 3, d, seed=s).edges:
            hits[index[e]] += 1
    se = math.sqrt(0.3 * 0.7 / trials)
    assert np.all(np.abs(hits / trials - 0.3) <= 4 * se)


@given(st.integers(0, math.comb(40, 3) - 1))
def test_unrank_vectorized_matches_exact(r):
    got = tuple(int(x) for x in _unrank_colex(np.array([r], dtype=np.int64), 40, 3)[0])
    assert got == _unrank_colex_exact(r, 3)


def test_unrank_is_a_bijection():
    ranks = np.arange(math.comb(9, 4), dtype=np.int64)
    tuples = [tuple(int(x) for x in row) for row in _unrank_colex(ranks, 9, 4)]
    assert sorted(tuples) == list(combinations(range(9), 4))


# ---- density statistics ----------------------------------------------------

def test_density_stats_example(H0):
    # S = first three vertices: one edge inside, pair {0, 1} witnessed by vertex 3
    assert density_stats(H0, {0, 1, 2}) == (1, 1)
    # the last edge is inside; 2 and 3 never share an edge with an outside vertex
    assert density_stats(H0, {2, 3, 4}) == (1, 0)
    assert density_stats(H0, set()) == (0, 0)


def test_partial_degree_example(H0):
    assert partial_degree(H0, {2, 3}, 4, 2) == 1
    assert partial_degree(H0, {2, 3}, 4, 1) == 0
    for v in range(5):
        for j in (1, 2):
            assert partial_degree(H0, set(), v, j) == 0


def test_k3_only():
    H = Hypergraph.from_edges(4, 2, [(0, 1)])
    with pytest.raises(ValueError):
        density_stats(H, {0})
    with pytest.raises(ValueError):
        shadow_graph(H, {0, 1})
    with pytest.raises(ValueError):
        partial_degree(H, {0}, 1, 1)


@settings(max_examples=150)
@given(hypergraph_and_subset())
def test_density_stats_matches_oracle(HS):
    H, S = HS
    assert density_stats(H, S) == brute_density(H, S)


@settings(max_examples=150)
@given(hypergraph_and_subset(), st.integers(0, 11), st.sampled_from([1, 2]))
def test_partial_degree_matches_oracle(HS, v, j):
    H, S = HS
    v %= H.n
    assert partial_degree(H, S, v, j) == brute_partial(H, S, v, j)


# ---- shadow graph ----------------------------------------------------------

def test_shadow_example(H0):
    G = shadow_graph(H0, range(5))
    want = {(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3), (2, 4), (3, 4)}
    assert set(G.edges()) == want
    assert G.witnesses[(0, 1)] == (0, 1)


def test_shadow_empty(H0):
    G = shadow_graph(H0, [])
    assert G.num_edges() == 0 and not G.universe


@settings(max_examples=150)
@given(hypergraph_and_subset())
def test_shadow_matches_oracle(HS):
    H, U = HS
    G = shadow_graph(H, U)
    assert set(G.edges()) == brute_shadow(H, U)
    for v in U:
        assert v not in G.adjacency[v]
        for w in G.adjacency[v]:
            assert v in G.adjacency[w]
    for (x, y), ws in G.witnesses.items():
        assert ws and all({x, y} <= set(H.edges[i]) for i in ws)


@settings(max_examples=100)
@given(small_hypergraphs())
def test_shadow_degree_bound(H):
    G = shadow_graph(H, range(H.n))
    S = set(range(H.n))
    for v in range(H.n):
        assert G.degree(v) <= partial_degree(H, S, v, 1) + 2 * partial_degree(H, S, v, 2)


# ---- text format -----------------------------------------------------------

def test_round_trip(H0):
    assert parse(serialize(H0)) == H0


@settings(max_examples=50)
@given(small_hypergraphs())
def test_round_trip_random(H):
    H2 = parse(serialize(H))
    assert H2 == H and H2.n == H.n and H2.k == H.k


def test_parse_header_only():
    H = parse("3 5 0\n")
    assert (H.n, H.k, H.m) == (5, 3, 0)


def test_parse_comments_and_blank_lines():
    H = parse("# a comment\n3 4 1\n\n# another\n0 1 2\n")
    assert list(H.edges) == [(0, 1, 2)]


@pytest.mark.parametrize(
    "text, line",
    [
        ("3 5 1\n3 1 1\n", 2),  # repeated vertex
        ("3 5 1\n0 1 9\n", 2),  # out of range
        ("3 5 1\n2 1 0\n", 2),  # unsorted
        ("3 5 2\n0 1 2\n0 1 2\n", 3),  # duplicate edge
        ("3 five 0\n", 1),  # malformed header
        ("3 5 2\n0 1 2\n", None),  # edge count mismatch
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(HypergraphFormatError) as exc:
        parse(text)
    if line is not None:
        assert exc.value.lineno == line
        assert f"line {line}" in str(exc.value)


def test_complete():
    H = complete(5, 3)
    assert H.m == 10
