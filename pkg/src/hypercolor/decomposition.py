"""Level decomposition of the shadow graph G_U used in A's endgame.

Levels ``U_0 ⊇ U_1 ⊇ ... ⊇ U_l`` are peeled off the uncolored set. Edges
between ``U_i`` and ``U_{i-1} \\ U_i`` are labeled heavy or light; light
edges (plus the edges inside the top level) form the forest ``Phi`` that A
colors with a tree strategy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .hypergraph import ShadowGraph

HEAVY = "heavy"
LIGHT = "light"
INTERNAL = "internal"
REST = "rest"


@dataclass(frozen=True)
class LevelParams:
    sigma: float
    theta: float
    Delta: float
    tau: float


@dataclass(frozen=True)
class DecompositionParams:
    q: float
    d: float
    delta: float
    n: int
    L: float = 100.0
    closure_factor: int = 39

    def __post_init__(self):
        if not (self.q > 0 and self.d > 1 and self.delta > 0 and self.n >= 1):
            raise ValueError("need q > 0, d > 1, delta > 0, n >= 1")

    @classmethod
    def with_default_q(cls, d: float, delta: float, n: int, q: Optional[float] = None) -> "DecompositionParams":
        """Defaults to q = d^(2/3 + delta)."""
        if q is None:
            q = d ** (2.0 / 3.0 + delta)
        return cls(q=q, d=d, delta=delta, n=n)

    @property
    def beta(self) -> float:
        return self.q / 3.0

    @property
    def gamma(self) -> float:
        return 14.0 * math.log(self.d) / self.q

    @property
    def K(self) -> float:
        return self.d ** (2.0 / 3.0 - 2.0 * self.delta) * math.log(self.d) ** 2

    @property
    def zeta(self) -> int:
        return math.ceil(2.0 / self.delta)

    @property
    def termination_size(self) -> float:
        return math.log(self.n)

    @property
    def heavy_cap(self) -> float:
        return 3.0 * self.beta / 50.0

    @property
    def level_degree_cap(self) -> float:
        return self.beta / 3.0

    @property
    def b_threshold(self) -> float:
        return 3.0 * self.beta / self.L

    def level(self, i: int) -> LevelParams:
        d, delta, L, beta = self.d, self.delta, self.L, self.beta
        lg = math.log(d)
        if i == 1:
            sigma = 2.0 * self.gamma
            theta = math.e * d ** (1.0 / 3.0 - delta) * lg ** 2 / 14.0
            tau = theta / beta
        elif i == 2:
            sigma = 15.0 * math.e * lg ** 3 / d ** (1.0 + 3.0 * delta)
            theta = L / delta
            tau = theta / beta
        elif i >= 3:
            sigma = 500.0 * math.e * L * lg ** 3 / (delta * d ** (5.0 / 3.0 + 4.0 * delta))
            theta = 2.5
            tau = L * theta / beta
        else:
            raise ValueError("levels start at 1")
        return LevelParams(sigma, theta, 3.0 * theta + beta / L, tau)

    def top_count(self, i: int) -> int:
        """Size of U_{i,a} at levels 1 and 2: floor(2 tau sigma n)."""
        lp = self.level(i)
        return int(math.floor(2.0 * lp.tau * lp.sigma * self.n))


@dataclass
class Chains:
    A: list[frozenset[int]]
    B: list[frozenset[int]]
    top: frozenset[int]
    top_threshold_set: frozenset[int]
    Y: frozenset[int]


@dataclass
class Failure:
    prop: str
    witness: object
    detail: str = ""


@dataclass
class Decomposition:
    levels: list[frozenset[int]]
    edge_labels: dict[tuple[int, int], str]
    chains: dict[int, Chains]
    closures: dict[int, tuple[frozenset[int], int]]
    forest: dict[int, frozenset[int]]
    cycle: Optional[list[int]]
    params: DecompositionParams
    failure: Optional[Failure] = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failure is None

    @property
    def ell(self) -> int:
        return len(self.levels) - 1

    def level_of(self) -> dict[int, int]:
        lev = {}
        for i, U in enumerate(self.levels):
            for v in U:
                lev[v] = i
        return lev

    def fingerprint(self) -> str:
        """Canonical text form, for byte-level determinism checks."""
        parts = [",".join(map(str, sorted(U))) for U in self.levels]
        parts.append(";".join(f"{a}-{b}:{lab}" for (a, b), lab in sorted(self.edge_labels.items())))
        parts.append("cycle=" + ("" if self.cycle is None else ",".join(map(str, self.cycle))))
        parts.append("fail=" + ("" if self.failure is None else self.failure.prop))
        return "\n".join(parts)


def _deg_into(G: ShadowGraph, v: int, S) -> int:
    return sum(1 for w in G.adjacency[v] if w in S)


def _peel_level(G: ShadowGraph, W: frozenset[int], params: DecompositionParams, i: int):
    """Levels 1 and 2: top-degree set plus the A/B chain recursion."""
    lp = params.level(i)
    deg = {v: _deg_into(G, v, W) for v in W}
    count = min(params.top_count(i), len(W))
    order = sorted(W, key=lambda v: (-deg[v], v))
    top = frozenset(order[:count])
    over = frozenset(v for v in W if deg[v] >= 3.0 * lp.Delta)
    thr = params.b_threshold
    A = [W - top]
    B = [frozenset(v for v in top if _deg_into(G, v, A[0]) >= thr)]
    for _ in range(params.zeta):
        a_next = frozenset(v for v in A[-1] if _deg_into(G, v, B[-1]) >= 2)
        b_next = frozenset(v for v in B[-1] if _deg_into(G, v, a_next) >= thr)
        A.append(a_next)
        B.append(b_next)
    B_last = B[-1]
    Y = frozenset(v for v in A[-1] if any(w in B_last for w in G.adjacency[v]))
    Ui = top | Y
    # exit indices: last chain position containing the vertex
    a_exit = {}
    for j, Aj in enumerate(A):
        for v in Aj:
            a_exit[v] = j
    b_exit = {}
    for j, Bj in enumerate(B):
        for v in Bj:
            b_exit[v] = j
    labels = {}
    for u in Ui:
        for v in G.adjacency[u]:
            if v not in W or v in Ui:
                continue
            if u in Y:
                lab = HEAVY  # Q3
            elif u in b_exit:
                lab = LIGHT if b_exit[u] >= a_exit[v] else HEAVY  # Q1 / Q2
            else:
                lab = HEAVY  # top vertex outside B_0: fewer than 3beta/L such edges
            labels[(min(u, v), max(u, v))] = lab
    notes = []
    if not over <= top:
        notes.append(f"level {i}: {len(over - top)} vertices of degree >= 3*Delta fell outside the top set")
    return Ui, labels, Chains(A, B, top, over, Y), notes


def _closure_level(G: ShadowGraph, W: frozenset[int], params: DecompositionParams, i: int):
    """Levels >= 3: degree threshold 3*Delta, then close under 'two neighbors inside'."""
    import heapq

    lp = params.level(i)
    core = frozenset(v for v in W if _deg_into(G, v, W) >= 3.0 * lp.Delta)
    inside = set(core)
    hits = {v: 0 for v in W}
    heap: list[int] = []
    for v in core:
        for w in G.adjacency[v]:
            if w in W and w not in inside:
                hits[w] += 1
                if hits[w] == 2:
                    heapq.heappush(heap, w)
    added = 0
    cap = params.closure_factor * len(core)
    while heap:
        y = heapq.heappop(heap)
        if y in inside:
            continue
        inside.add(y)
        added += 1
        if added > cap:
            return None, {}, core, added
        for w in G.adjacency[y]:
            if w in W and w not in inside:
                hits[w] += 1
                if hits[w] == 2:
                    heapq.heappush(heap, w)
    Ui = frozenset(inside)
    labels = {}
    for u in Ui:
        for v in G.adjacency[u]:
            if v in W and v not in Ui:
                labels[(min(u, v), max(u, v))] = LIGHT
    return Ui, labels, core, added


def _components_cyclomatic(adj: dict[int, set[int]]) -> tuple[int, int]:
    """Return (#edges - #vertices + #components, #components)."""
    seen = set()
    comps = 0
    for s in adj:
        if s in seen:
            continue
        comps += 1
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    m = sum(len(s) for s in adj.values()) // 2
    return m - len(adj) + comps, comps


def find_cycle(adj: dict[int, set[int]]) -> Optional[list[int]]:
    """Vertices of some cycle (lowest start first), or None for a forest."""
    parent: dict[int, Optional[int]] = {}
    for s in sorted(adj):
        if s in parent:
            continue
        parent[s] = None
        depth = {s: 0}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in sorted(adj[x]):
                if y == parent[x]:
                    continue
                if y in parent:
                    # back edge x-y closes a cycle
                    px, py = [x], [y]
                    a, b = x, y
                    while depth[a] > depth[b]:
                        a = parent[a]
                        px.append(a)
                    while depth[b] > depth[a]:
                        b = parent[b]
                        py.append(b)
                    while a != b:
                        a = parent[a]
                        b = parent[b]
                        px.append(a)
                        py.append(b)
                    cyc = px + py[-2::-1]
                    return sorted(set(cyc))
                parent[y] = x
                depth[y] = depth[x] + 1
                stack.append(y)
    return None


def build_decomposition(G: ShadowGraph, params: DecompositionParams, n: Optional[int] = None, d: Optional[float] = None) -> Decomposition:
    """Construct the levels and labels; never raises on bad instances.

    ``n`` and ``d`` default to the values in ``params``. On a construction or
    property failure the returned object has ``failure`` set.
    """
    if n is not None and n != params.n:
        raise ValueError("n disagrees with params.n")
    if d is not None and d != params.d:
        raise ValueError("d disagrees with params.d")
    levels = [frozenset(G.universe)]
    labels: dict[tuple[int, int], str] = {}
    chains: dict[int, Chains] = {}
    closures: dict[int, tuple[frozenset[int], int]] = {}
    notes: list[str] = []
    failure = None
    i = 0
    limit = max(8, 4 * int(math.log2(len(G.universe) + 2)) + 8)
    while len(levels[-1]) > params.termination_size:
        i += 1
        W = levels[-1]
        if i <= 2:
            Ui, lab, ch, nt = _peel_level(G, W, params, i)
            chains[i] = ch
            notes.extend(nt)
        else:
            Ui, lab, core, added = _closure_level(G, W, params, i)
            closures[i] = (core, added)
            if Ui is None:
                failure = Failure("closure", i, f"closure added {added} > {params.closure_factor} x {len(core)} vertices")
                break
            if Ui == W:
                failure = Failure("progress", i, f"level {i} did not shrink, |U| = {len(W)}")
                break
        labels.update(lab)
        levels.append(Ui)
        if i > limit:
            failure = Failure("progress", i, "too many levels")
            break
    top = levels[-1]
    forest: dict[int, set[int]] = {v: set() for v in G.universe}
    for (a, b), lab in labels.items():
        if lab == LIGHT:
            forest[a].add(b)
            forest[b].add(a)
    for v in top:
        for w in G.adjacency[v]:
            if w in top and v < w:
                labels[(v, w)] = INTERNAL
                forest[v].add(w)
                forest[w].add(v)
    for (a, b) in G.witnesses:
        labels.setdefault((a, b), REST)
    top_adj = {v: {w for w in G.adjacency[v] if w in top} for v in top}
    cycle = find_cycle(top_adj)
    D = Decomposition(
        levels=levels,
        edge_labels=labels,
        chains=chains,
        closures=closures,
        forest={v: frozenset(s) for v, s in forest.items()},
        cycle=cycle,
        params=params,
        failure=failure,
        notes=notes,
    )
    if D.failure is None:
        report = verify_properties(D, G, params)
        for name, res in report.items():
            if not res.ok:
                D.failure = Failure(name, res.witness, res.detail)
                break
    return D


@dataclass
class PropertyResult:
    ok: bool
    witness: object = None
    detail: str = ""


def verify_properties(D: Decomposition, G: ShadowGraph, params: DecompositionParams) -> dict[str, PropertyResult]:
    """Check P1-P5 (plus structural sanity) directly from the definitions."""
    out: dict[str, PropertyResult] = {}
    levels = D.levels
    ell = len(levels) - 1
    lab = D.edge_labels

    def label(a, b):
        return lab.get((min(a, b), max(a, b)))

    # structure: nesting, labels exactly on cross-level edges
    res = PropertyResult(True)
    if levels and levels[0] != G.universe:
        res = PropertyResult(False, None, "U_0 is not the shadow graph universe")
    for i in range(1, len(levels)):
        if res.ok and not levels[i] <= levels[i - 1]:
            res = PropertyResult(False, i, f"U_{i} not contained in U_{i - 1}")
    if res.ok:
        lev = D.level_of()
        for (a, b) in G.witnesses:
            cross = lev[a] != lev[b]
            l_ab = label(a, b)
            want_cross = l_ab in (HEAVY, LIGHT)
            if cross != want_cross and not (l_ab == INTERNAL and lev[a] == lev[b] == ell):
                res = PropertyResult(False, (a, b), f"edge labeled {l_ab} across levels {lev[a]},{lev[b]}")
                break
    out["structure"] = res

    # P1: at most one light neighbor one level up
    res = PropertyResult(True)
    for i in range(ell):
        upper = levels[i + 1]
        for v in sorted(levels[i] - upper):
            lights = [w for w in G.adjacency[v] if w in upper and label(v, w) == LIGHT]
            if len(lights) > 1:
                res = PropertyResult(False, v, f"vertex {v} has light up-neighbors {sorted(lights)}")
                break
        if not res.ok:
            break
    out["P1"] = res

    # P2: from level 3 on every cross edge is light
    res = PropertyResult(True)
    for i in range(3, ell + 1):
        lower = levels[i - 1] - levels[i]
        for v in sorted(levels[i]):
            bad = [w for w in G.adjacency[v] if w in lower and label(v, w) != LIGHT]
            if bad:
                res = PropertyResult(False, (v, min(bad)), f"edge {v}-{min(bad)} at level {i} not light")
                break
        if not res.ok:
            break
    out["P2"] = res

    # P3: heavy down-degree at levels 1, 2
    res = PropertyResult(True)
    cap = params.heavy_cap
    for i in (1, 2):
        if i > ell:
            break
        lower = levels[i - 1] - levels[i]
        for v in sorted(levels[i]):
            h = sum(1 for w in G.adjacency[v] if w in lower and label(v, w) == HEAVY)
            if h > cap:
                res = PropertyResult(False, v, f"vertex {v} has {h} heavy neighbors at level {i} > {cap:.3g}")
                break
        if not res.ok:
            break
    out["P3"] = res

    # P4: degree into own level set
    res = PropertyResult(True)
    cap = params.level_degree_cap
    for i in range(ell):
        Ui = levels[i]
        for v in sorted(Ui - levels[i + 1]):
            dv = _deg_into(G, v, Ui)
            if dv > cap:
                res = PropertyResult(False, v, f"vertex {v} has {dv} neighbors in U_{i} > {cap:.3g}")
                break
        if not res.ok:
            break
    out["P4"] = res

    # P5: at most one cycle inside the top level
    top = levels[-1] if levels else frozenset()
    top_adj = {v: {w for w in G.adjacency[v] if w in top} for v in top}
    excess, _ = _components_cyclomatic(top_adj)
    out["P5"] = PropertyResult(excess <= 1, None if excess <= 1 else sorted(top)[:1], f"cyclomatic number {excess}")

    # forest: Phi minus one recorded cycle is acyclic
    phi = {v: set(s) for v, s in D.forest.items()}
    excess_phi, _ = _components_cyclomatic(phi) if phi else (0, 0)
    allowed = 1 if D.cycle is not None else 0
    out["forest"] = PropertyResult(excess_phi <= allowed, None, f"Phi cyclomatic number {excess_phi}")
    return out
