"""k-uniform hypergraphs, the random model H(n, p; k), and 2-shadows."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np


class HypergraphFormatError(ValueError):
    """Raised by :func:`parse` with the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Hypergraph:
    n: int
    k: int
    edges: tuple[tuple[int, ...], ...]
    incidence: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, k: int, edges: Iterable[Sequence[int]]) -> "Hypergraph":
        if k < 2:
            raise ValueError(f"uniformity must be >= 2, got {k}")
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        canon = []
        seen = set()
        for e in edges:
            t = tuple(sorted(int(x) for x in e))
            if len(t) != k or len(set(t)) != k:
                raise ValueError(f"edge {tuple(e)} is not a {k}-set")
            if t[0] < 0 or t[-1] >= n:
                raise ValueError(f"edge {t} has a vertex outside 0..{n - 1}")
            if t in seen:
                raise ValueError(f"duplicate edge {t}")
            seen.add(t)
            canon.append(t)
        inc: list[list[int]] = [[] for _ in range(n)]
        for i, e in enumerate(canon):
            for v in e:
                inc[v].append(i)
        return cls(n, k, tuple(canon), tuple(tuple(x) for x in inc))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def max_degree(self) -> int:
        return max((len(x) for x in self.incidence), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.k, sorted(self.edges)) == (other.n, other.k, sorted(other.edges))

    def __hash__(self) -> int:
        return hash((self.n, self.k, tuple(sorted(self.edges))))


# ----------------------------------------------------------------------
# random generation

def _comb_vec(c: np.ndarray, i: int) -> np.ndarray:
    """Exact C(c, i) elementwise for int64 ``c`` (0 where c < i)."""
    out = np.ones_like(c)
    for j in range(1, i + 1):
        out = out * (c - j + 1) // j
    out[c < i] = 0
    return out


def _unrank_colex(ranks: np.ndarray, n: int, k: int) -> np.ndarray:
    """Rows are the k-subsets (ascending) with the given colex ranks."""
    r = ranks.astype(np.int64).copy()
    out = np.empty((len(r), k), dtype=np.int64)
    for i in range(k, 0, -1):
        # largest c with C(c, i) <= r
        est = np.floor((r.astype(np.float64) * math.factorial(i)) ** (1.0 / i)).astype(np.int64) + i - 1
        c = np.clip(est, i - 1, n - 1)
        for _ in range(64):
            over = _comb_vec(c, i) > r
            if not over.any():
                break
            c[over] -= 1
        for _ in range(64):
            nxt = np.minimum(c + 1, n - 1)
            up = (nxt > c) & (_comb_vec(nxt, i) <= r)
            if not up.any():
                break
            c[up] += 1
        out[:, i - 1] = c
        r -= _comb_vec(c, i)
    return out


def _unrank_colex_exact(rank: int, k: int) -> tuple[int, ...]:
    out = []
    for i in range(k, 0, -1):
        c = i - 1
        lo, hi = i - 1, i - 1
        while math.comb(hi, i) <= rank:
            hi = 2 * hi + 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if math.comb(mid, i) <= rank:
                lo = mid
            else:
                hi = mid - 1
        c = lo
        out.append(c)
        rank -= math.comb(c, i)
    return tuple(reversed(out))


def generate_random(n: int, k: int, d: float, seed: int) -> Hypergraph:
    """Sample H(n, p; k) with p = d / n^(k-1).

    Edges are chosen by geometric skips over the colex ranking of k-subsets,
    so the cost is proportional to the number of edges, not C(n, k).
    """
    if k < 2 or n < k:
        raise ValueError(f"need n >= k >= 2, got n={n}, k={k}")
    if d < 0 or d > n ** (k - 1):
        raise ValueError(f"d={d} puts p outside [0, 1]")
    p = d / n ** (k - 1)
    total = math.comb(n, k)
    rng = np.random.default_rng(seed)
    if p == 0.0:
        return Hypergraph.from_edges(n, k, [])
    ranks: list[np.ndarray] = []
    pos = -1
    while True:
        remaining = total - pos - 1
        expect = remaining * p
        chunk = int(expect + 6 * math.sqrt(expect) + 16)
        gaps = rng.geometric(p, size=chunk).astype(np.int64)
        steps = pos + np.cumsum(gaps)
        keep = steps[steps < total]
        ranks.append(keep)
        if len(keep) < chunk:
            break
        pos = int(keep[-1])
    allr = np.concatenate(ranks)
    if total * n < 2 ** 62:
        rows = _unrank_colex(allr, n, k)
        edges = [tuple(int(x) for x in row) for row in rows]
    else:
        edges = [_unrank_colex_exact(int(r), k) for r in allr]
    return Hypergraph.from_edges(n, k, edges)


# ----------------------------------------------------------------------
# density statistics (k = 3)

def _require_k3(H: Hypergraph) -> None:
    if H.k != 3:
        raise ValueError(f"only defined for 3-uniform hypergraphs, got k={H.k}")


def density_stats(H: Hypergraph, S: Iterable[int]) -> tuple[int, int]:
    """Return ``(e3, e2)``: edges inside S, and pairs of S with a witness outside S."""
    _require_k3(H)
    S = set(S)
    e3 = 0
    pairs = set()
    seen_edges = set()
    for v in S:
        for ei in H.incidence[v]:
            if ei in seen_edges:
                continue
            seen_edges.add(ei)
            inside = [x for x in H.edges[ei] if x in S]
            if len(inside) == 3:
                e3 += 1
            elif len(inside) == 2:
                pairs.add((inside[0], inside[1]))
    return e3, len(pairs)


def partial_degree(H: Hypergraph, S: Iterable[int], v: int, j: int) -> int:
    """Number of edges {v, x, y} with exactly ``j`` of x, y in S."""
    _require_k3(H)
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    S = S if isinstance(S, (set, frozenset)) else set(S)
    count = 0
    for ei in H.incidence[v]:
        hits = sum(1 for x in H.edges[ei] if x != v and x in S)
        if hits == j:
            count += 1
    return count


# ----------------------------------------------------------------------
# 2-shadow

@dataclass(frozen=True)
class ShadowGraph:
    """G_U: pairs of U lying in a common edge (third vertex unrestricted)."""

    universe: frozenset[int]
    adjacency: dict[int, frozenset[int]] = field(repr=False)
    witnesses: dict[tuple[int, int], tuple[int, ...]] = field(repr=False)

    def degree(self, v: int) -> int:
        return len(self.adjacency.get(v, ()))

    def degree_into(self, v: int, S) -> int:
        return sum(1 for w in self.adjacency.get(v, ()) if w in S)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency.get(v, frozenset())

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.witnesses)

    def num_edges(self) -> int:
        return len(self.witnesses)


def shadow_graph(H: Hypergraph, U: Iterable[int]) -> ShadowGraph:
    _require_k3(H)
    U = frozenset(U)
    adj: dict[int, set[int]] = {v: set() for v in U}
    wit: dict[tuple[int, int], list[int]] = {}
    for v in sorted(U):
        for ei in H.incidence[v]:
            for w in H.edges[ei]:
                if w > v and w in U:
                    adj[v].add(w)
                    adj[w].add(v)
                    wit.setdefault((v, w), []).append(ei)
    return ShadowGraph(
        U,
        {v: frozenset(s) for v, s in adj.items()},
        {p: tuple(sorted(set(ws))) for p, ws in wit.items()},
    )


# ----------------------------------------------------------------------
# text format

def serialize(H: Hypergraph) -> str:
    lines = [f"{H.k} {H.n} {H.m}"]
    lines.extend(" ".join(map(str, e)) for e in H.edges)
    return "\n".join(lines) + "\n"


def parse(text: str) -> Hypergraph:
    header = None
    edges: list[tuple[int, ...]] = []
    seen = set()
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise HypergraphFormatError(lineno, f"non-integer token in {line!r}") from None
        if header is None:
            if len(nums) != 3:
                raise HypergraphFormatError(lineno, "header must be 'k n m'")
            k, n, m = nums
            if k < 2 or n < 0 or m < 0:
                raise HypergraphFormatError(lineno, f"bad header values k={k} n={n} m={m}")
            header = (k, n, m)
            continue
        k, n, m = header
        if len(nums) != k:
            raise HypergraphFormatError(lineno, f"expected {k} vertices, got {len(nums)}")
        if any(x < 0 or x >= n for x in nums):
            raise HypergraphFormatError(lineno, f"vertex out of range 0..{n - 1}")
        if any(a >= b for a, b in zip(nums, nums[1:])):
            raise HypergraphFormatError(lineno, "edge vertices must be strictly increasing")
        t = tuple(nums)
        if t in seen:
            raise HypergraphFormatError(lineno, f"duplicate edge {t}")
        seen.add(t)
        edges.append(t)
    if header is None:
        raise HypergraphFormatError(0, "missing header")
    k, n, m = header
    if len(edges) != m:
        raise HypergraphFormatError(0, f"header declares {m} edges, found {len(edges)}")
    return Hypergraph.from_edges(n, k, edges)


def complete(n: int, k: int) -> Hypergraph:
    return Hypergraph.from_edges(n, k, combinations(range(n), k))
