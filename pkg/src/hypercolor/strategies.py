"""Player strategies.

A strategy is an object with ``reset(state)``, ``choose(state, rng)`` and
``observe(state, v, c, mover)``. ``choose`` returns a ``(vertex, color)``
pair; the engine validates it. Memory lives on the instance and is cleared
by ``reset``, so one instance can play many games in sequence.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import Optional

from .decomposition import Decomposition, DecompositionParams, build_decomposition
from .engine import GameState, Player
from .hypergraph import shadow_graph
from .rng import CounterRNG

log = logging.getLogger(__name__)


class Strategy:
    name = "strategy"

    def reset(self, state: GameState) -> None:
        pass

    def choose(self, state: GameState, rng: CounterRNG) -> tuple[int, int]:
        raise NotImplementedError

    def observe(self, state: GameState, v: int, c: int, mover: Player) -> None:
        pass

    def stats(self) -> dict:
        return {}


def random_move(state: GameState, rng: CounterRNG) -> tuple[int, int]:
    """Uniform uncolored vertex, then a uniform available color there."""
    v = state.uncolored[rng.below(len(state.uncolored))]
    cols = state.available(v)
    return v, cols[rng.below(len(cols))]


def greedy_move(state: GameState) -> tuple[int, int]:
    v = state.argmin_availability()
    return v, state.available(v)[0]


class AliceGreedy(Strategy):
    """Color the uncolored vertex with fewest available colors."""

    name = "alice:greedy"

    def choose(self, state, rng):
        return greedy_move(state)


class BobMirror(Strategy):
    """Reuse A's last color on a uniformly random vertex where it is still available."""

    name = "bob:mirror"

    def __init__(self):
        self.fallbacks = 0

    def reset(self, state):
        self.fallbacks = 0

    def choose(self, state, rng):
        if state.history:
            c = state.history[-1][1]
            m = state.candidates(c)
            if m > 0:
                return state.nth_candidate(c, rng.below(m)), c
        self.fallbacks += 1
        return random_move(state, rng)

    def stats(self):
        return {"mirror_fallbacks": self.fallbacks}


class BobUniformRandom(Strategy):
    name = "bob:random"

    def choose(self, state, rng):
        total = sum(state.availability(v) for v in state.uncolored)
        r = rng.below(total)
        for v in state.uncolored:
            a = state.availability(v)
            if r < a:
                return v, state.available(v)[r]
            r -= a
        raise AssertionError("legal move count out of sync")


def resulting_min_availability(state: GameState, v: int, c: int, mover: Player) -> float:
    state._color(v, c, mover)
    try:
        a = state.min_availability()
    finally:
        state.undo()
    return float("inf") if a is None else a


class BobGreedyBlock(Strategy):
    """One-ply search: minimize the smallest availability left among uncolored vertices."""

    name = "bob:block"

    def choose(self, state, rng):
        best = None
        for v in list(state.uncolored):
            for c in state.available(v):
                score = resulting_min_availability(state, v, c, state.turn)
                if best is None or score < best[0]:
                    best = (score, v, c)
        return best[1], best[2]


class ForestPlay:
    """Tree-coloring agenda on the forest Phi.

    A keeps every component of the uncolored part of Phi adjacent to at most
    two colored vertices. When a move leaves a component with three, she
    colors their median inside it, so no vertex of Phi is ever colored with
    more than three colored Phi-neighbors (four with the cycle opening).
    """

    def __init__(self, phi: dict[int, frozenset[int]], cycle: Optional[list[int]]):
        self.phi = phi
        self.cycle = cycle
        self.removed: Optional[int] = None
        self.opened = cycle is None

    def _component(self, state: GameState, start: int):
        """BFS over uncolored Phi vertices; returns (parent map, colored nbr -> attachment)."""
        parent = {start: None}
        attach: dict[int, int] = {}
        dq = deque([start])
        while dq:
            x = dq.popleft()
            for y in sorted(self.phi[x]):
                if y == self.removed:
                    continue
                if state.assignment[y] is None:
                    if y not in parent:
                        parent[y] = x
                        dq.append(y)
                elif y not in attach:
                    attach[y] = x
        return parent, attach

    @staticmethod
    def _path_to_root(parent, x):
        path = [x]
        while parent[x] is not None:
            x = parent[x]
            path.append(x)
        return path

    def _median(self, state: GameState, points: list[int]) -> int:
        a, b, c = points[:3]
        parent, _ = self._component(state, a)
        pb = self._path_to_root(parent, b)
        pc = set(self._path_to_root(parent, c))
        for x in pb:
            if x in pc:
                return x
        return a

    def opening(self) -> Optional[int]:
        if not self.opened:
            self.opened = True
            self.removed = self.cycle[0]
            return self.removed
        return None

    def target(self, state: GameState, last_bob: Optional[int]) -> tuple[int, int]:
        """Vertex to color next and the colored-neighbor count of its component."""
        if last_bob is not None and last_bob in self.phi and last_bob != self.removed:
            for x in sorted(self.phi[last_bob]):
                if x == self.removed or state.assignment[x] is not None:
                    continue
                _, attach = self._component(state, x)
                if len(attach) >= 3:
                    pts = [attach[y] for y in sorted(attach)][:3]
                    return self._median(state, pts), len(attach)
        v = state.uncolored[0]
        _, attach = self._component(state, v)
        if len(attach) >= 2:
            return attach[min(attach)], len(attach)
        return v, len(attach)


class AliceTwoPhase(Strategy):
    """Greedy until the switch point, then the forest agenda on G_U.

    The switch fires on A's turn once at most ``2 gamma n`` vertices are
    uncolored and every uncolored vertex has at least ``beta / 2`` colors.
    At that moment the shadow graph on the uncolored set is built and
    decomposed once; if the decomposition fails, A stays greedy.
    """

    name = "alice:two-phase"

    def __init__(self, params: Optional[DecompositionParams] = None, d: Optional[float] = None, delta: float = 0.1):
        self.fixed_params = params
        self.d = d
        self.delta = delta
        self.reset(None)

    def reset(self, state):
        self.params: Optional[DecompositionParams] = self.fixed_params
        if state is not None and self.params is None:
            if self.d is None:
                raise ValueError("alice:two-phase needs d or explicit params")
            self.params = DecompositionParams(q=state.q, d=self.d, delta=self.delta, n=state.n)
        self.phase = 1
        self.switch_move: Optional[int] = None
        self.decomposition: Optional[Decomposition] = None
        self.forest: Optional[ForestPlay] = None
        self.gu_adj = None
        self.events = 0
        self.max_phi_colored = 0
        self.contract_violations = 0
        self.fallbacks = 0
        self.decomposition_ok: Optional[bool] = None
        self.failure: Optional[str] = None

    def switch_ready(self, state: GameState) -> bool:
        p = self.params
        u = len(state.uncolored)
        if u > 2 * p.gamma * state.n:
            return False
        a = state.min_availability()
        return a is not None and a >= p.beta / 2

    def _start_phase2(self, state: GameState) -> None:
        if state.H.k != 3:
            raise ValueError("alice:two-phase is defined for 3-uniform hypergraphs")
        self.phase = 2
        self.switch_move = len(state.history)
        G = shadow_graph(state.H, state.uncolored)
        self.gu_adj = G.adjacency
        D = build_decomposition(G, self.params)
        self.decomposition = D
        self.decomposition_ok = D.ok
        if D.ok:
            self.forest = ForestPlay(D.forest, D.cycle)
        else:
            self.failure = f"{D.failure.prop}: {D.failure.detail}"
            log.info("decomposition failed (%s); staying greedy", self.failure)

    def _color_for(self, state: GameState, v: int) -> int:
        avail = state.available(v)
        used = {state.assignment[w] for w in self.gu_adj.get(v, ()) if state.assignment[w] is not None}
        for c in avail:
            if c not in used:
                return c
        self.fallbacks += 1
        return avail[0]

    def choose(self, state, rng):
        if self.phase == 1 and self.switch_ready(state):
            self._start_phase2(state)
        if self.forest is None:
            return greedy_move(state)
        v = self.forest.opening()
        if v is None or state.assignment[v] is not None:
            last_bob = None
            if state.history and state.history[-1][2] is Player.B:
                last_bob = state.history[-1][0]
            v, _ = self.forest.target(state, last_bob)
        return v, self._color_for(state, v)

    def observe(self, state, v, c, mover):
        if self.forest is None:
            return
        phi = self.forest.phi
        if v not in phi:
            return
        k = sum(1 for w in phi[v] if state.assignment[w] is not None)
        self.events += 1
        self.max_phi_colored = max(self.max_phi_colored, k)
        limit = 3 if self.forest.cycle is None else 4
        if k > limit:
            self.contract_violations += 1

    def stats(self):
        return {
            "phase2": self.phase == 2,
            "switch_move": self.switch_move,
            "decomposition_ok": self.decomposition_ok,
            "phase2_events": self.events,
            "max_colored_phi_neighbors": self.max_phi_colored,
            "contract_violations": self.contract_violations,
            "fallback_events": self.fallbacks,
            "failure": self.failure,
        }


STRATEGIES = {
    "alice:greedy": AliceGreedy,
    "alice:two-phase": AliceTwoPhase,
    "bob:mirror": BobMirror,
    "bob:random": BobUniformRandom,
    "bob:block": BobGreedyBlock,
}


def make_strategy(name: str, **kwargs) -> Strategy:
    """Build a strategy from its CLI name (the ``alice:``/``bob:`` prefix is optional)."""
    key = name
    if key not in STRATEGIES:
        matches = [k for k in STRATEGIES if k.split(":", 1)[1] == name]
        if len(matches) != 1:
            raise KeyError(f"unknown strategy {name!r}; choose from {sorted(STRATEGIES)}")
        key = matches[0]
    cls = STRATEGIES[key]
    if cls is AliceTwoPhase:
        return cls(**kwargs)
    return cls()
