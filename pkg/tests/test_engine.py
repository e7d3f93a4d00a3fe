import copy
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import h0, random_hypergraph, small_hypergraphs
from hypercolor.engine import GameState, IllegalMove, Player, Status, play_game
from hypercolor.hypergraph import Hypergraph, generate_random
from hypercolor.strategies import AliceGreedy, BobMirror, BobUniformRandom, Strategy


def snapshot(s: GameState):
    return (
        list(s.assignment),
        copy.deepcopy(s.blockers),
        copy.deepcopy(s.edge_colors),
        list(s.edge_uncolored),
        list(s.uncolored),
        {c: set(v) for c, v in s.classes.items()},
        {c: list(v) for c, v in s.blocked_at.items()},
        set(s.dead),
        s.turn,
        list(s.history),
    )


def oracle_available(H, assignment, q, v):
    """Colors c such that no edge through v has all its other vertices colored c."""
    out = []
    for c in range(1, q + 1):
        if not any(all(assignment[x] == c for x in e if x != v) for e in H.edges if v in e):
            out.append(c)
    return out


def test_fresh_state_all_available(H0):
    s = GameState(H0, 3)
    assert all(s.availability(v) == 3 for v in range(5))
    assert s.legal_moves() == {(v, c) for v in range(5) for c in (1, 2, 3)}
    assert s.check_consistency() == []
    assert s.status is Status.ONGOING


def test_single_edge_one_color():
    H = Hypergraph.from_edges(3, 3, [(0, 1, 2)])
    s = GameState(H, 1)
    assert [s.availability(v) for v in range(3)] == [1, 1, 1]
    s.apply_move(0, 1, Player.A)
    assert s.status is Status.ONGOING
    s.apply_move(1, 1, Player.B)
    assert s.dead == {2}
    assert s.status is Status.B_WON


def test_single_edge_two_colors_always_a():
    H = Hypergraph.from_edges(3, 3, [(0, 1, 2)])
    for order in ([0, 1, 2], [2, 0, 1], [1, 2, 0]):
        for colors in ([1, 1, 2], [2, 2, 1], [1, 2, 1]):
            s = GameState(H, 2)
            for v, c in zip(order, colors):
                s.apply_move(v, c, s.turn)
            assert s.status is Status.A_WON


def test_legal_moves_example(H0):
    s = GameState(H0, 2)
    s.apply_move(0, 1, Player.A)
    s.apply_move(1, 1, Player.B)
    moves = s.legal_moves()
    assert (2, 1) not in moves and (3, 1) not in moves
    assert {(2, 2), (3, 2), (4, 1), (4, 2)} <= moves


@pytest.mark.parametrize(
    "move, mover, reason",
    [
        ((0, 1), Player.B, "turn"),
        ((9, 1), Player.A, "range"),
        ((0, 5), Player.A, "color"),
    ],
)
def test_illegal_moves_rejected(H0, move, mover, reason):
    s = GameState(H0, 2)
    before = snapshot(s)
    with pytest.raises(IllegalMove):
        s.apply_move(*move, mover)
    assert snapshot(s) == before


def test_recoloring_and_blocked_color_rejected(H0):
    s = GameState(H0, 2)
    s.apply_move(0, 1, Player.A)
    s.apply_move(1, 1, Player.B)
    before = snapshot(s)
    assert s.check_move(0, 2, Player.A) is not None
    assert s.check_move(2, 1, Player.A) is not None
    with pytest.raises(IllegalMove):
        s.apply_move(2, 1, Player.A)
    assert snapshot(s) == before


def test_undo_round_trip():
    rng = random.Random(3)
    for _ in range(50):
        H = random_hypergraph(rng, rng.randint(4, 10), p=0.4)
        s = GameState(H, rng.randint(1, 4))
        snaps = [snapshot(s)]
        while s.status is Status.ONGOING:
            v = rng.choice(list(s.uncolored))
            s.apply_move(v, rng.choice(s.available(v)), s.turn)
            snaps.append(snapshot(s))
        snaps.pop()
        while snaps:
            s.undo()
            assert snapshot(s) == snaps.pop()
        assert s.check_consistency() == []


@settings(max_examples=200, deadline=None)
@given(small_hypergraphs(n_max=10), st.integers(1, 4), st.randoms(use_true_random=False))
def test_incremental_matches_oracle(H, q, rnd):
    s = GameState(H, q)
    prev = {v: q for v in range(H.n)}
    while s.status is Status.ONGOING:
        v = rnd.choice(list(s.uncolored))
        s.apply_move(v, rnd.choice(s.available(v)), s.turn)
        assert s.check_consistency() == []
        for w in s.uncolored:
            want = oracle_available(H, s.assignment, q, w)
            assert s.available(w) == want
            # availability never increases
            assert s.availability(w) <= prev[w]
            prev[w] = s.availability(w)
        mins = [s.availability(w) for w in s.uncolored]
        assert (s.status is Status.B_WON) == (bool(mins) and min(mins) == 0)
    if s.status is Status.A_WON:
        assert len(s.history) == H.n


def test_argmin_ties_lowest_index(H0):
    s = GameState(H0, 2)
    assert s.argmin_availability() == 0
    s.apply_move(0, 1, Player.A)
    s.apply_move(1, 1, Player.B)
    assert s.argmin_availability() == 2
    assert s.min_availability() == 1


def test_candidates_and_nth(H0):
    s = GameState(H0, 2)
    s.apply_move(0, 1, Player.A)
    s.apply_move(1, 1, Player.B)
    assert s.candidates(1) == 1
    assert s.nth_candidate(1, 0) == 4
    assert s.candidates(2) == 3
    assert [s.nth_candidate(2, r) for r in range(3)] == [2, 3, 4]


class Illegal(Strategy):
    def choose(self, state, rng):
        return 0, 1


def test_forfeit_on_illegal_move():
    H = h0()
    out = play_game(H, 2, AliceGreedy(), Illegal(), seed=0)
    assert out.winner is Player.A
    assert out.forfeit and out.forfeit.startswith("B")


def test_pigeonhole_many_colors_a_wins():
    H = generate_random(60, 3, 20, seed=2)
    q = H.max_degree() + 1
    for seed in range(10):
        for bob in (BobMirror(), BobUniformRandom()):
            assert play_game(H, q, AliceGreedy(), bob, seed).winner is Player.A


def test_single_edge_one_color_b_wins_fast():
    H = Hypergraph.from_edges(3, 3, [(0, 1, 2)])
    for seed in range(10):
        out = play_game(H, 1, AliceGreedy(), BobUniformRandom(), seed)
        assert out.winner is Player.B and out.rounds <= 2


def test_trace_is_deterministic():
    H = generate_random(80, 3, 15, seed=4)
    a = play_game(H, 4, AliceGreedy(), BobMirror(), seed=9, trace=True)
    b = play_game(H, 4, AliceGreedy(), BobMirror(), seed=9, trace=True)
    assert a.trace_lines() == b.trace_lines()
    assert a.trace_lines()[0].split()[:2] == ["1", "A"]
