"""Game state for the vertex-coloring game on a k-uniform hypergraph.

Colors are ``1..q``. A color ``c`` is blocked at an uncolored vertex ``w``
when some edge through ``w`` has all its other ``k - 1`` vertices colored
``c``. The game is lost for A as soon as an uncolored vertex has every
color blocked (a dead vertex); it is won once every vertex is colored.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from sortedcontainers import SortedList

from .hypergraph import Hypergraph


class Player(str, Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Player":
        return Player.B if self is Player.A else Player.A


class IllegalMove(ValueError):
    pass


class Status(str, Enum):
    ONGOING = "ongoing"
    A_WON = "A"
    B_WON = "B"


class GameState:
    """Partial coloring with incrementally maintained availability.

    Per edge we keep the count of each color on it and the number of
    uncolored vertices; per vertex, the number of edges blocking each color.
    A move touches only the edges through the colored vertex.
    """

    def __init__(self, H: Hypergraph, q: int):
        if q < 1:
            raise ValueError("need at least one color")
        self.H = H
        self.q = q
        n = H.n
        self.assignment: list[Optional[int]] = [None] * n
        self.mover: list[Optional[Player]] = [None] * n
        self.edge_colors: list[dict[int, int]] = [dict() for _ in H.edges]
        self.edge_uncolored: list[int] = [H.k] * H.m
        self.blockers: list[dict[int, int]] = [dict() for _ in range(n)]
        self.classes: dict[int, set[int]] = {c: set() for c in range(1, q + 1)}
        self.blocked_at: dict[int, SortedList] = {c: SortedList() for c in range(1, q + 1)}
        self.uncolored = SortedList(range(n))
        self.history: list[tuple[int, int, Player]] = []
        self.turn = Player.A
        self.dead: set[int] = set()
        self._heap = [(q, v) for v in range(n)]

    # -- queries ---------------------------------------------------------

    @property
    def n(self) -> int:
        return self.H.n

    def availability(self, v: int) -> int:
        return self.q - len(self.blockers[v])

    def available(self, v: int) -> list[int]:
        b = self.blockers[v]
        return [c for c in range(1, self.q + 1) if c not in b]

    def is_available(self, v: int, c: int) -> bool:
        return 1 <= c <= self.q and c not in self.blockers[v]

    def is_colored(self, v: int) -> bool:
        return self.assignment[v] is not None

    @property
    def num_colored(self) -> int:
        return self.n - len(self.uncolored)

    @property
    def status(self) -> Status:
        if self.dead:
            return Status.B_WON
        if not self.uncolored:
            return Status.A_WON
        return Status.ONGOING

    def min_availability(self) -> Optional[int]:
        v = self.argmin_availability()
        return None if v is None else self.availability(v)

    def argmin_availability(self) -> Optional[int]:
        """Uncolored vertex with least availability, lowest index on ties."""
        heap = self._heap
        while heap:
            a, v = heap[0]
            if self.assignment[v] is None and self.availability(v) == a:
                return v
            heapq.heappop(heap)
        return None

    def legal_moves(self) -> set[tuple[int, int]]:
        return {(v, c) for v in self.uncolored for c in self.available(v)}

    def candidates(self, c: int) -> int:
        """Number of uncolored vertices where color ``c`` is available."""
        return len(self.uncolored) - len(self.blocked_at[c])

    def nth_candidate(self, c: int, r: int) -> int:
        """The ``r``-th smallest uncolored vertex (0-based) with ``c`` available."""
        blocked = self.blocked_at[c]
        if len(blocked) * 4 > len(self.uncolored):
            cands = [v for v in self.uncolored if c not in self.blockers[v]]
            return cands[r]
        pos = r
        for w in blocked:
            if self.uncolored.index(w) <= pos:
                pos += 1
            else:
                break
        return self.uncolored[pos]

    def color_class(self, c: int) -> set[int]:
        return self.classes[c]

    def bob_set(self, c: int) -> set[int]:
        return {v for v in self.classes[c] if self.mover[v] is Player.B}

    # -- mutation --------------------------------------------------------

    def check_move(self, v: int, c: int, mover: Player) -> Optional[str]:
        if self.status is not Status.ONGOING:
            return "game is over"
        if mover is not self.turn:
            return f"it is {self.turn.value}'s turn"
        if not 0 <= v < self.n:
            return f"vertex {v} out of range"
        if self.assignment[v] is not None:
            return f"vertex {v} already colored"
        if not 1 <= c <= self.q:
            return f"color {c} out of range 1..{self.q}"
        if c in self.blockers[v]:
            return f"color {c} unavailable at vertex {v}"
        return None

    def apply_move(self, v: int, c: int, mover: Player) -> Status:
        reason = self.check_move(v, c, mover)
        if reason is not None:
            raise IllegalMove(reason)
        self._color(v, c, mover)
        return self.status

    def _color(self, v: int, c: int, mover: Player) -> None:
        H = self.H
        km1 = H.k - 1
        self.assignment[v] = c
        self.mover[v] = mover
        self.classes[c].add(v)
        self.uncolored.remove(v)
        for col in self.blockers[v]:
            self.blocked_at[col].remove(v)
        for ei in H.incidence[v]:
            ec = self.edge_colors[ei]
            ec[c] = ec.get(c, 0) + 1
            self.edge_uncolored[ei] -= 1
            if self.edge_uncolored[ei] == 1 and ec[c] == km1:
                w = next(x for x in H.edges[ei] if self.assignment[x] is None)
                b = self.blockers[w]
                if c not in b:
                    b[c] = 1
                    self.blocked_at[c].add(w)
                    a = self.q - len(b)
                    heapq.heappush(self._heap, (a, w))
                    if a == 0:
                        self.dead.add(w)
                else:
                    b[c] += 1
        self.history.append((v, c, mover))
        self.turn = mover.other

    def undo(self) -> None:
        """Revert the most recent move exactly."""
        v, c, mover = self.history.pop()
        H = self.H
        km1 = H.k - 1
        for ei in H.incidence[v]:
            ec = self.edge_colors[ei]
            if self.edge_uncolored[ei] == 1 and ec[c] == km1:
                w = next(x for x in H.edges[ei] if self.assignment[x] is None)
                b = self.blockers[w]
                b[c] -= 1
                if b[c] == 0:
                    del b[c]
                    self.blocked_at[c].remove(w)
                    self.dead.discard(w)
                    heapq.heappush(self._heap, (self.q - len(b), w))
            ec[c] -= 1
            if ec[c] == 0:
                del ec[c]
            self.edge_uncolored[ei] += 1
        self.assignment[v] = None
        self.mover[v] = None
        self.classes[c].discard(v)
        self.uncolored.add(v)
        for col in self.blockers[v]:
            self.blocked_at[col].add(v)
        heapq.heappush(self._heap, (self.availability(v), v))
        self.turn = mover

    # -- consistency -----------------------------------------------------

    def recompute_blockers(self) -> list[dict[int, int]]:
        """Blocker counts for uncolored vertices, from scratch."""
        out: list[dict[int, int]] = [dict() for _ in range(self.n)]
        for e in self.H.edges:
            unc = [x for x in e if self.assignment[x] is None]
            if len(unc) != 1:
                continue
            cols = {self.assignment[x] for x in e if x != unc[0]}
            if len(cols) == 1:
                c = cols.pop()
                out[unc[0]][c] = out[unc[0]].get(c, 0) + 1
        return out

    def check_consistency(self) -> list[str]:
        """Differences between the incremental state and a full recount."""
        problems = []
        fresh = self.recompute_blockers()
        for v in range(self.n):
            if self.assignment[v] is None and fresh[v] != self.blockers[v]:
                problems.append(f"blockers at {v}: {self.blockers[v]} != {fresh[v]}")
        for ei, e in enumerate(self.H.edges):
            counts: dict[int, int] = {}
            for x in e:
                if self.assignment[x] is not None:
                    counts[self.assignment[x]] = counts.get(self.assignment[x], 0) + 1
            if counts != self.edge_colors[ei]:
                problems.append(f"edge {ei} colors {self.edge_colors[ei]} != {counts}")
            if self.edge_uncolored[ei] != sum(1 for x in e if self.assignment[x] is None):
                problems.append(f"edge {ei} uncolored count off")
            if any(cnt == self.H.k for cnt in counts.values()):
                problems.append(f"edge {ei} monochromatic")
        for c in range(1, self.q + 1):
            want = sorted(v for v in self.uncolored if c in fresh[v])
            if list(self.blocked_at[c]) != want:
                problems.append(f"blocked_at[{c}] out of sync")
            if self.classes[c] != {v for v in range(self.n) if self.assignment[v] == c}:
                problems.append(f"class {c} out of sync")
        if sum(len(s) for s in self.classes.values()) + len(self.uncolored) != self.n:
            problems.append("class sizes + uncolored != n")
        dead = {v for v in self.uncolored if len(fresh[v]) == self.q}
        if dead != self.dead:
            problems.append(f"dead set {self.dead} != {dead}")
        return problems


def new_game(H: Hypergraph, q: int) -> GameState:
    return GameState(H, q)


@dataclass
class GameOutcome:
    winner: Player
    rounds: int
    dead_vertex: Optional[int]
    assignment: list[Optional[int]]
    trace: list[tuple[int, str, int, int, int]] = field(default_factory=list)
    forfeit: Optional[str] = None
    stats: dict = field(default_factory=dict)

    def trace_lines(self) -> list[str]:
        return [f"{r} {m} {v} {c} {a}" for r, m, v, c, a in self.trace]


def play_game(H: Hypergraph, q: int, alice, bob, seed: int, trace: bool = False) -> GameOutcome:
    """Alternate moves, A first, until one side wins.

    ``alice`` and ``bob`` are strategies (see :mod:`hypercolor.strategies`).
    Each gets its own random stream derived from ``seed``. A strategy that
    returns an illegal move forfeits.
    """
    from .rng import CounterRNG, mix64

    state = GameState(H, q)
    rngs = {Player.A: CounterRNG(mix64(seed ^ 0xA11CE)), Player.B: CounterRNG(mix64(seed ^ 0xB0B))}
    players = {Player.A: alice, Player.B: bob}
    for p in players.values():
        p.reset(state)
    steps: list[tuple[int, str, int, int, int]] = []
    forfeit = None
    winner = None
    while state.status is Status.ONGOING:
        who = state.turn
        v, c = players[who].choose(state, rngs[who])
        reason = state.check_move(v, c, who)
        if reason is not None:
            forfeit = f"{who.value} played illegal move ({v}, {c}): {reason}"
            winner = who.other
            break
        state._color(v, c, who)
        for p in players.values():
            p.observe(state, v, c, who)
        if trace:
            a_min = state.min_availability()
            steps.append((len(state.history), who.value, v, c, -1 if a_min is None else a_min))
    if winner is None:
        winner = Player.A if state.status is Status.A_WON else Player.B
    dead = min(state.dead) if state.dead else None
    stats = {}
    for who, p in players.items():
        s = p.stats()
        if s:
            stats[who.value] = s
    return GameOutcome(winner, len(state.history), dead, list(state.assignment), steps, forfeit, stats)
