"""Compiled batch simulator for the baseline pairings.

Covers ``alice:greedy`` against ``bob:mirror`` or ``bob:random``. Every
decision mirrors the generic engine and strategies draw-for-draw (same
SplitMix64 streams, same candidate ordering, same tie-breaks), so outcomes
and traces are identical; the test suite checks this on random instances.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

from .hypergraph import Hypergraph
from .rng import mix64

BOB_KINDS = {"bob:mirror": 0, "bob:random": 1}
ALICE_KINDS = {"alice:greedy": 0}

_BIG = np.int64(1 << 40)


@njit(cache=True)
def _mix(z):
    z = (z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)
    return z ^ (z >> uint64(31))


@njit(cache=True)
def _below(key, ctr, m):
    z = _mix(key + ctr * uint64(0x9E3779B97F4A7C15))
    u = np.float64(z >> uint64(11)) * (1.0 / 9007199254740992.0)
    r = np.int64(u * m)
    if r >= m:
        r = m - 1
    return r


@njit(cache=True)
def _fw_add(tree, row, i, delta):
    i += 1
    size = tree.shape[1]
    while i < size:
        tree[row, i] += delta
        i += i & (-i)


@njit(cache=True)
def _fw_kth(tree, row, k, logn):
    """0-based index of the (k+1)-th unit (k is 0-based)."""
    pos = 0
    rem = k + 1
    step = 1 << logn
    size = tree.shape[1]
    while step > 0:
        nxt = pos + step
        if nxt < size and tree[row, nxt] < rem:
            pos = nxt
            rem -= tree[row, nxt]
        step >>= 1
    return pos


@njit(cache=True)
def _fw_build_ones(tree, row, n):
    for i in range(1, n + 1):
        tree[row, i] += 1
        j = i + (i & (-i))
        if j <= n:
            tree[row, j] += tree[row, i]


@njit(cache=True)
def _fw_build(tree, row, vals, n):
    for i in range(1, n + 1):
        tree[row, i] += vals[i - 1]
        j = i + (i & (-i))
        if j <= n:
            tree[row, j] += tree[row, i]


@njit(cache=True)
def _seg_update(segv, segi, base, pos, val):
    i = base + pos
    segv[i] = val
    i >>= 1
    while i >= 1:
        l = 2 * i
        r = l + 1
        if segv[r] < segv[l]:
            segv[i] = segv[r]
            segi[i] = segi[r]
        else:
            segv[i] = segv[l]
            segi[i] = segi[l]
        i >>= 1


@njit(cache=True)
def _play(n, k, edges, inc_ptr, inc_idx, q, key_a, key_b, bob_kind, want_trace, trace):
    m = edges.shape[0]
    assign = np.zeros(n, np.int32)
    edge_unc = np.full(m, k, np.int32)
    blocked = np.zeros((n, q + 1), np.bool_)
    avail = np.full(n, q, np.int64)
    logn = 0
    while (1 << (logn + 1)) <= n:
        logn += 1
    # candidate trees: row c for color c, row 0 for uncolored vertices
    cand = np.zeros((q + 1, n + 1), np.int64)
    for c in range(q + 1):
        _fw_build_ones(cand, c, n)
    cand_cnt = np.full(q + 1, n, np.int64)
    # availability tree for uniform legal move sampling
    avtree = np.zeros((1, n + 1), np.int64)
    _fw_build(avtree, 0, avail, n)
    total_avail = n * q
    base = 1
    while base < n:
        base *= 2
    segv = np.full(2 * base, _BIG, np.int64)
    segi = np.zeros(2 * base, np.int64)
    for v in range(base):
        segi[base + v] = v
        if v < n:
            segv[base + v] = q
    for i in range(base - 1, 0, -1):
        l = 2 * i
        r = l + 1
        if segv[r] < segv[l]:
            segv[i] = segv[r]
            segi[i] = segi[r]
        else:
            segv[i] = segv[l]
            segi[i] = segi[l]
    ctr_b = uint64(0)
    colored = 0
    last_color = 0
    dead = -1
    winner = 0  # 0 = A, 1 = B
    turn = 0
    while True:
        if turn == 0:
            v = segi[1]
            c = 1
            while blocked[v, c]:
                c += 1
        else:
            v = -1
            c = 0
            if bob_kind == 0:
                if colored > 0 and cand_cnt[last_color] > 0:
                    ctr_b += uint64(1)
                    r = _below(key_b, ctr_b, cand_cnt[last_color])
                    v = _fw_kth(cand, last_color, r, logn)
                    c = last_color
            else:
                ctr_b += uint64(1)
                r = _below(key_b, ctr_b, total_avail)
                v = _fw_kth(avtree, 0, r, logn)
                # position of r inside v's block
                before = 0
                i = v
                while i > 0:
                    before += avtree[0, i]
                    i -= i & (-i)
                rr = r - before
                c = 0
                for col in range(1, q + 1):
                    if not blocked[v, col]:
                        if rr == 0:
                            c = col
                            break
                        rr -= 1
            if v < 0:
                ctr_b += uint64(1)
                r = _below(key_b, ctr_b, cand_cnt[0])
                v = _fw_kth(cand, 0, r, logn)
                ctr_b += uint64(1)
                r = _below(key_b, ctr_b, avail[v])
                c = 0
                for col in range(1, q + 1):
                    if not blocked[v, col]:
                        if r == 0:
                            c = col
                            break
                        r -= 1
        # apply
        assign[v] = c
        colored += 1
        last_color = c
        _fw_add(cand, 0, v, -1)
        cand_cnt[0] -= 1
        for col in range(1, q + 1):
            if not blocked[v, col]:
                _fw_add(cand, col, v, -1)
                cand_cnt[col] -= 1
        _fw_add(avtree, 0, v, -avail[v])
        total_avail -= avail[v]
        _seg_update(segv, segi, base, v, _BIG)
        for p in range(inc_ptr[v], inc_ptr[v + 1]):
            e = inc_idx[p]
            edge_unc[e] -= 1
            if edge_unc[e] == 1:
                w = -1
                ok = True
                for j in range(k):
                    x = edges[e, j]
                    if assign[x] == 0:
                        w = x
                    elif assign[x] != c:
                        ok = False
                if ok and not blocked[w, c]:
                    blocked[w, c] = True
                    avail[w] -= 1
                    _fw_add(cand, c, w, -1)
                    cand_cnt[c] -= 1
                    _fw_add(avtree, 0, w, -1)
                    total_avail -= 1
                    _seg_update(segv, segi, base, w, avail[w])
                    if avail[w] == 0 and (dead < 0 or w < dead):
                        dead = w
        if want_trace:
            trace[colored - 1, 0] = v
            trace[colored - 1, 1] = c
            trace[colored - 1, 2] = segv[1] if colored < n else -1
        if dead >= 0:
            winner = 1
            break
        if colored == n:
            winner = 0
            break
        turn = 1 - turn
    return winner, colored, dead


def _csr(H: Hypergraph):
    edges = np.array(H.edges, dtype=np.int64).reshape(-1, H.k)
    ptr = np.zeros(H.n + 1, dtype=np.int64)
    for v in range(H.n):
        ptr[v + 1] = ptr[v] + len(H.incidence[v])
    idx = np.fromiter((e for lst in H.incidence for e in lst), dtype=np.int64, count=int(ptr[-1]))
    return edges, ptr, idx


class FastGame:
    """Reusable compiled player for one hypergraph."""

    def __init__(self, H: Hypergraph):
        self.H = H
        self.edges, self.ptr, self.idx = _csr(H)

    def play(self, q: int, seed: int, bob: str = "bob:mirror", alice: str = "alice:greedy", trace: bool = False):
        """Return ``(winner, rounds, dead_vertex, trace_rows)``; winner is "A" or "B"."""
        if alice not in ALICE_KINDS or bob not in BOB_KINDS:
            raise KeyError(f"no compiled path for {alice} vs {bob}")
        key_a = mix64(seed ^ 0xA11CE)
        key_b = mix64(seed ^ 0xB0B)
        buf = np.zeros((self.H.n if trace else 1, 3), dtype=np.int64)
        w, rounds, dead = _play(self.H.n, self.H.k, self.edges, self.ptr, self.idx, q,
                                np.uint64(key_a), np.uint64(key_b), BOB_KINDS[bob], trace, buf)
        rows = [tuple(int(x) for x in buf[i]) for i in range(rounds)] if trace else []
        return ("A" if w == 0 else "B"), int(rounds), (None if dead < 0 else int(dead)), rows


def supports(alice: str, bob: str) -> bool:
    return alice in ALICE_KINDS and bob in BOB_KINDS
