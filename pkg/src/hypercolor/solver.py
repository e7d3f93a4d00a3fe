"""Exact game values on tiny hypergraphs.

States are memoized up to renaming of colors: a position is the set of
color classes (as vertex bitmasks) and whose turn it is, which is already
implied by how many vertices are colored.
"""

from __future__ import annotations

from typing import Optional

from .engine import GameState, Player, Status
from .hypergraph import Hypergraph


class BudgetExceeded(RuntimeError):
    """The search visited more nodes than allowed; no answer is given."""


class NonMonotone(AssertionError):
    pass


def canonical_key(classes) -> tuple[tuple[int, ...], ...]:
    """Classes as sorted member tuples, sorted lexicographically; empties dropped."""
    out = []
    for members in classes:
        ms = tuple(sorted(members))
        if ms:
            out.append(ms)
    return tuple(sorted(out))


class _Search:
    def __init__(self, H: Hypergraph, q: int, node_limit: int):
        if q < 1:
            raise ValueError("need at least one color")
        self.n = H.n
        self.q = q
        self.full = (1 << H.n) - 1
        self.node_limit = node_limit
        self.nodes = 0
        # for each vertex the masks of the other k-1 vertices of its edges
        self.rest = [[] for _ in range(H.n)]
        for e in H.edges:
            mask = 0
            for x in e:
                mask |= 1 << x
            for x in e:
                self.rest[x].append(mask & ~(1 << x))
        self.memo: dict[tuple[tuple[int, ...], bool], bool] = {}

    def blocked(self, v: int, cls: int) -> bool:
        for r in self.rest[v]:
            if r & cls == r:
                return True
        return False

    def has_dead(self, classes: tuple[int, ...], colored: int) -> bool:
        if len(classes) < self.q:
            return False
        for v in range(self.n):
            if not colored >> v & 1:
                if all(self.blocked(v, cls) for cls in classes):
                    return True
        return False

    def a_wins(self, classes: tuple[int, ...], colored: int, a_turn: bool) -> bool:
        """Value of a live position (no dead vertex, something uncolored)."""
        key = (tuple(sorted(classes)), a_turn)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise BudgetExceeded(f"more than {self.node_limit} positions")
        result = not a_turn
        for v in range(self.n):
            if colored >> v & 1:
                continue
            bit = 1 << v
            options = [i for i, cls in enumerate(classes) if not self.blocked(v, cls)]
            if len(classes) < self.q:
                options.append(len(classes))
            for i in options:
                if i == len(classes):
                    child = classes + (bit,)
                else:
                    child = classes[:i] + (classes[i] | bit,) + classes[i + 1:]
                ncol = colored | bit
                if ncol == self.full:
                    val = True
                elif self.has_dead(child, ncol):
                    val = False
                else:
                    val = self.a_wins(child, ncol, not a_turn)
                if val == a_turn:
                    result = val
                    break
            if result == a_turn:
                break
        self.memo[key] = result
        return result


def solve(H: Hypergraph, q: int, node_limit: int = 2_000_000) -> Player:
    """Winner under optimal play with ``q`` colors, A moving first."""
    if H.n == 0:
        return Player.A
    s = _Search(H, q, node_limit)
    return Player.A if s.a_wins((), 0, True) else Player.B


def solve_unmemoized(H: Hypergraph, q: int, node_limit: int = 50_000_000) -> Player:
    """Reference search over raw (vertex, color) moves on the incremental engine.

    No memo table and no color symmetry: every color 1..q is tried.
    """
    state = GameState(H, q)
    count = [0]

    def value() -> bool:
        st = state.status
        if st is Status.A_WON:
            return True
        if st is Status.B_WON:
            return False
        count[0] += 1
        if count[0] > node_limit:
            raise BudgetExceeded(f"more than {node_limit} nodes")
        want = state.turn is Player.A
        for v in list(state.uncolored):
            for c in state.available(v):
                state._color(v, c, state.turn)
                val = value()
                state.undo()
                if val == want:
                    return want
        return not want

    return Player.A if value() else Player.B


def game_chromatic_number(H: Hypergraph, q_max: int, node_limit: int = 2_000_000) -> Optional[int]:
    """Least q <= q_max for which A wins, or None.

    The value at ``q + 1`` is also solved (when within range) and must again
    be a win for A; otherwise :class:`NonMonotone` is raised.
    """
    for q in range(1, q_max + 1):
        if solve(H, q, node_limit) is Player.A:
            if q + 1 <= q_max and solve(H, q + 1, node_limit) is not Player.A:
                raise NonMonotone(f"A wins with {q} colors but not {q + 1}")
            return q
    return None


def chromatic_number(H: Hypergraph, node_limit: int = 5_000_000) -> int:
    """Least q with a total coloring that has no monochromatic edge."""
    if H.n == 0:
        return 0
    if H.m == 0:
        return 1
    order = sorted(range(H.n), key=lambda v: -len(H.incidence[v]))
    colors = [0] * H.n
    nodes = [0]

    def ok(v: int) -> bool:
        c = colors[v]
        for ei in H.incidence[v]:
            if all(colors[x] == c for x in H.edges[ei]):
                return False
        return True

    def place(i: int, used: int, q: int) -> bool:
        if i == len(order):
            return True
        nodes[0] += 1
        if nodes[0] > node_limit:
            raise BudgetExceeded(f"more than {node_limit} nodes")
        v = order[i]
        for c in range(1, min(used + 1, q) + 1):
            colors[v] = c
            if ok(v) and place(i + 1, max(used, c), q):
                return True
        colors[v] = 0
        return False

    q = 1
    while True:
        colors = [0] * H.n
        if place(0, 0, q):
            return q
        q += 1
