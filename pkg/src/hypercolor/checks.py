"""Named verification suites shared by ``cmd verify`` and the acceptance tests.

Each suite returns ``{"check": name, "holds": bool, "records": [...], ...}``.
"""

from __future__ import annotations

import math
import random
import time
from itertools import combinations
from typing import Callable

import mpmath
import numpy as np

from . import analysis as an
from .decomposition import DecompositionParams, build_decomposition, verify_properties
from .engine import GameState, Player
from .hypergraph import Hypergraph, generate_random, shadow_graph
from .solver import chromatic_number, game_chromatic_number, solve, solve_unmemoized
from .strategies import AliceTwoPhase, BobMirror


def _summary(name: str, records: list[dict], **extra) -> dict:
    out = {"check": name, "holds": all(r["holds"] for r in records), "records": records}
    out.update(extra)
    return out


def check_formula(eps_values=(0.01, 0.1)) -> dict:
    recs = [an.formula_report(e) for e in eps_values]
    # the claim under test is the closed form; the inequality itself fails
    for r in recs:
        r["inequality_holds"] = r["holds"]
        r["holds"] = r["closed_form_match"]
    return _summary("formula", recs, discrepancy=any(not r["inequality_holds"] for r in recs))


def check_bounds(d: float = math.e ** 6, k: int = 3) -> dict:
    bp = an.eval_bounds(d, k)
    mp = an.eval_bounds_mp(mpmath.e ** 6 if d == math.e ** 6 else d, k)
    recs = []
    for key in ("D", "chi_est"):
        val = getattr(bp, key)
        ref = float(mp[key])
        recs.append(an.record("bounds", {"d": d, "k": k, "field": key}, val, ref,
                              float(f"{val:.4g}") == float(f"{ref:.4g}"), rel_err=abs(val - ref) / ref))
    return _summary("bounds", recs)


def check_f_lower(count: int = 1000, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    recs = []
    for _ in range(count):
        n = int(rng.integers(1, 10_001))
        q = int(rng.integers(1, 51))
        p = float(10 ** rng.uniform(-7, -2))
        recs.append(an.f_lower_bound_check(an.random_composition(rng, n, q), p))
    bad = [r for r in recs if not r["holds"]]
    return {"check": "f-lower", "holds": not bad, "count": count, "violations": bad[:10],
            "records": recs[:5]}


BINS_GRID = [(v, rho, q) for v in (50, 100, 500) for rho in (0.3, 0.5, 0.8) for q in (1, 2, 3)]


def check_bins(trials: int = 10 ** 6, seed: int = 0, grid=BINS_GRID) -> dict:
    recs = []
    for i, (v, rho, q) in enumerate(grid):
        cond = (1 - rho) ** v >= 1e-12
        recs.append(an.bins_check(v, rho, q, trials, seed + i, condition_on_positive=cond))
    return _summary("bins", recs)


CHERNOFF_GRID = [
    (200, 0.05, "lower", 0.3, None),
    (1000, 0.05, "lower", 0.2, None),
    (5000, 0.02, "lower", 0.1, None),
    (200, 0.05, "upper1", 0.3, None),
    (1000, 0.05, "upper1", 0.2, None),
    (5000, 0.02, "upper1", 0.1, None),
    (200, 0.05, "upper2", 0.0, 3.0),
    (1000, 0.01, "upper2", 0.0, 3.0),
    (2000, 0.002, "upper2", 0.0, 4.0),
]


def check_chernoff(samples: int = 10 ** 6, seed: int = 0, grid=CHERNOFF_GRID) -> dict:
    recs = [an.chernoff_check(n, p, which, eps, mu, samples, seed + i)
            for i, (n, p, which, eps, mu) in enumerate(grid)]
    return _summary("chernoff", recs)


def planted_core(n: int = 15, core: int = 6, extra_edges: int = 5, seed: int = 0) -> Hypergraph:
    rng = random.Random(seed)
    edges = set(combinations(range(core), 3))
    others = [t for t in combinations(range(n), 3) if not set(t) <= set(range(core))]
    edges.update(rng.sample(others, extra_edges))
    return Hypergraph.from_edges(n, 3, edges)


def check_density(samples: int = 10 ** 4, seed: int = 0, n: int = 1000, d: float = 20.0,
                  delta: float = 0.1) -> dict:
    recs = []
    H = planted_core()
    found = an.density_predicate_check(H, "L2", sigma=0.5, theta=1.01, mode="exhaustive", max_witnesses=1)
    recs.append(an.record("density", {"predicate": "L2", "instance": "planted 6-core in n=15", "sigma": 0.5, "theta": 1.01},
                          len(found), 1, bool(found), witness=found[:1]))
    H = generate_random(n, 3, d, seed)
    q = d ** (2 / 3 + delta)
    gamma = 14 * math.log(d) / q
    theta1 = 4 * gamma * d
    theta1b = math.e * d ** (1 / 3 - delta) * math.log(d) ** 2 / 14
    insts = [
        ("L1", min(gamma, 1.0), theta1),
        ("L1", an.max_sigma("L1", theta1b, d), theta1b),
        ("L2", an.max_sigma("L2", 3.0, d), 3.0),
    ]
    for i, (which, sigma, theta) in enumerate(insts):
        found = an.density_predicate_check(H, which, sigma=sigma, theta=theta, mode="sampled",
                                           trials=samples, seed=seed + 1 + i, max_witnesses=5)
        recs.append(an.record("density", {"predicate": which, "n": n, "d": d, "sigma": sigma, "theta": theta,
                                          "samples": samples,
                                          "hypothesis": an.density_hypothesis(which, sigma, theta, d)},
                              len(found), 0, not found, witness=found[:1]))
    return _summary("density", recs)


def blocked_matrix(edges: np.ndarray, assignment: np.ndarray, q: int) -> np.ndarray:
    """Boolean (n, q + 1) table of blocked colors, recounted from scratch.

    ``assignment`` holds 0 for uncolored vertices and colors 1..q otherwise.
    """
    out = np.zeros((len(assignment), q + 1), dtype=bool)
    if len(edges) == 0:
        return out
    C = assignment[edges]
    unc = C == 0
    one = unc.sum(axis=1) == 1
    lo = np.where(unc, q + 1, C).min(axis=1)
    mono = one & (lo == C.max(axis=1))
    rows = np.nonzero(mono)[0]
    out[edges[rows, unc[rows].argmax(axis=1)], lo[rows]] = True
    return out


def check_engine(sequences: int = 10 ** 5, seed: int = 0, n_max: int = 200) -> dict:
    """Random legal move sequences; incremental availability vs a full recount after every move.

    Sizes are log-uniform in [3, n_max]. Each sequence ends with a full
    structural comparison (edge counters, classes, blocked lists, dead set).
    """
    rng = random.Random(seed)
    mismatches = 0
    moves = 0
    first = None
    for s in range(sequences):
        n = max(3, int(round(math.exp(rng.uniform(math.log(3), math.log(n_max))))))
        k = rng.choice((2, 3, 3, 4)) if n >= 4 else 3
        m = rng.randint(0, min(3 * n, math.comb(n, k)))
        edges = set()
        while len(edges) < m:
            edges.add(tuple(sorted(rng.sample(range(n), k))))
        H = Hypergraph.from_edges(n, k, edges)
        q = rng.randint(1, 6)
        E = np.array(H.edges, dtype=np.int64).reshape(-1, k)
        asg = np.zeros(n, dtype=np.int64)
        state = GameState(H, q)
        bad = None
        for _ in range(rng.randint(1, n)):
            if state.status.value != "ongoing":
                break
            v = state.uncolored[rng.randrange(len(state.uncolored))]
            c = rng.choice(state.available(v))
            state.apply_move(v, c, state.turn)
            asg[v] = c
            moves += 1
            avail = q - blocked_matrix(E, asg, q)[:, 1:].sum(axis=1)
            for w in state.uncolored:
                if state.availability(w) != avail[w]:
                    bad = [f"availability at {w} after {len(state.history)} moves: "
                           f"{state.availability(w)} != {avail[w]}"]
                    break
            if bad:
                break
        bad = bad or state.check_consistency()
        if bad:
            mismatches += 1
            first = first or {"sequence": s, "n": n, "k": k, "q": q, "problems": bad[:3]}
    return {"check": "engine", "holds": mismatches == 0, "sequences": sequences, "moves": moves,
            "mismatches": mismatches, "first": first, "records": []}


def random_small_instance(rng: random.Random, n_max: int = 7, q_max: int = 3):
    n = rng.randint(3, n_max)
    allt = list(combinations(range(n), 3))
    m = rng.randint(0, min(len(allt), 2 * n))
    H = Hypergraph.from_edges(n, 3, rng.sample(allt, m))
    return H, rng.randint(1, q_max)


def check_solver(instances: int = 200, seed: int = 0) -> dict:
    rng = random.Random(seed)
    t0 = time.time()
    mism = []
    for i in range(instances):
        H, q = random_small_instance(rng)
        a, b = solve(H, q), solve_unmemoized(H, q)
        if a != b:
            mism.append({"instance": i, "edges": H.edges, "n": H.n, "q": q, "memo": a.value, "plain": b.value})
    return {"check": "solver", "holds": not mism, "instances": instances, "mismatches": mism,
            "seconds": time.time() - t0, "records": []}


def check_ground_truth(instances: int = 100, seed: int = 1) -> dict:
    e3 = Hypergraph.from_edges(3, 3, [(0, 1, 2)])
    empty = Hypergraph.from_edges(4, 3, [])
    two = Hypergraph.from_edges(6, 3, [(0, 1, 2), (3, 4, 5)])
    recs = []
    for name, H, want in (("single 3-edge", e3, 2), ("edgeless", empty, 1), ("two disjoint 3-edges", two, 2)):
        got = game_chromatic_number(H, 4)
        recs.append(an.record("chi_g", {"instance": name}, got, want, got == want))
    rng = random.Random(seed)
    solved = 0
    counterexample = None
    for _ in range(instances):
        H, _q = random_small_instance(rng, n_max=7, q_max=3)
        cg = game_chromatic_number(H, 4)
        if cg is None:
            continue
        solved += 1
        chi = chromatic_number(H)
        if cg < chi and counterexample is None:
            counterexample = {"edges": H.edges, "n": H.n, "chi_g": cg, "chi": chi}
    recs.append(an.record("chi_g>=chi", {"instances": instances}, solved, None, counterexample is None,
                          counterexample=counterexample))
    return _summary("ground-truth", recs)


def check_decomposition(n: int = 1000, d: float = 10.0, q: float = 200.0, delta: float = 0.1,
                        seeds: int = 5, seed: int = 0) -> dict:
    recs = []
    for s in range(seed, seed + seeds):
        H = generate_random(n, 3, d, s)
        G = shadow_graph(H, range(n))
        P = DecompositionParams(q=q, d=d, delta=delta, n=n)
        D1 = build_decomposition(G, P)
        D2 = build_decomposition(G, P)
        rep = verify_properties(D1, G, P)
        consistent = D1.ok == all(r.ok for r in rep.values())
        same = D1.fingerprint() == D2.fingerprint()
        recs.append(an.record("decomposition", {"n": n, "d": d, "q": q, "delta": delta, "seed": s},
                              [len(U) for U in D1.levels], None, consistent and same,
                              built=D1.ok, failure=None if D1.ok else D1.failure.prop,
                              properties={k: v.ok for k, v in rep.items()}))
    return _summary("decomposition", recs, success_rate=sum(r["built"] for r in recs) / len(recs))


def check_two_phase(successes: int = 100, n: int = 1000, d: float = 10.0, q: int = 200, delta: float = 0.1,
                    seed: int = 0, max_games: int = 1000) -> dict:
    """Play two-phase vs mirror until ``successes`` games had a verified decomposition."""
    from .engine import play_game

    H = generate_random(n, 3, d, seed)
    P = DecompositionParams(q=q, d=d, delta=delta, n=n)
    good = 0
    games = 0
    worst = 0
    fallbacks = 0
    violations = 0
    deterministic = True
    events = 0
    while good < successes and games < max_games:
        alice = AliceTwoPhase(params=P)
        play_game(H, q, alice, BobMirror(), seed=games)
        games += 1
        D = alice.decomposition
        if D is None or not D.ok:
            continue
        G = shadow_graph(H, D.levels[0])
        rep = verify_properties(D, G, P)
        if not all(r.ok for r in rep.values()):
            continue
        again = build_decomposition(G, P)
        deterministic &= again.fingerprint() == D.fingerprint()
        good += 1
        st = alice.stats()
        events += st["phase2_events"]
        worst = max(worst, st["max_colored_phi_neighbors"])
        fallbacks += st["fallback_events"]
        violations += st["contract_violations"]
    holds = good >= successes and worst <= 4 and fallbacks == 0 and violations == 0 and deterministic
    rec = an.record("two-phase", {"n": n, "d": d, "q": q, "delta": delta, "seed": seed},
                    worst, 4, holds, verified_games=good, games=games, phase2_events=events,
                    fallback_events=fallbacks, contract_violations=violations, deterministic=deterministic)
    return _summary("two-phase", [rec])


CHECKS: dict[str, Callable[..., dict]] = {
    "formula": check_formula,
    "bounds": check_bounds,
    "f-lower": check_f_lower,
    "bins": check_bins,
    "chernoff": check_chernoff,
    "density": check_density,
    "engine": check_engine,
    "solver": check_solver,
    "ground-truth": check_ground_truth,
    "decomposition": check_decomposition,
    "two-phase": check_two_phase,
}
