"""Batch experiments: configs, per-trial seeds, trial records and sweeps."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from .engine import play_game
from .fastsim import FastGame, supports
from .hypergraph import Hypergraph, generate_random, parse
from .rng import trial_seed
from .strategies import make_strategy


def parse_q(text: str) -> list[int]:
    """``"7"`` or ``"1..60"`` (inclusive) to a list of color counts."""
    text = str(text).strip()
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise ValueError(f"empty q range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def canonical_name(side: str, name: str) -> str:
    return name if ":" in name else f"{side}:{name}"


@dataclass
class ExperimentConfig:
    n: int = 1000
    k: int = 3
    d: float = 10.0
    q: list[int] = field(default_factory=lambda: [10])
    alice: str = "alice:greedy"
    bob: str = "bob:mirror"
    trials: int = 1
    seed: int = 0
    delta: float = 0.1
    eps: float = 0.1
    input_path: Optional[str] = None
    out: Optional[str] = None
    trace: bool = False

    def __post_init__(self):
        self.alice = canonical_name("alice", self.alice)
        self.bob = canonical_name("bob", self.bob)
        if not self.q:
            raise ValueError("q range is empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(q < 1 for q in self.q):
            raise ValueError("q must be >= 1")

    def echo(self) -> dict:
        out = asdict(self)
        out.pop("out")
        return out


@dataclass
class TrialRecord:
    config: dict
    trial: int
    q: int
    seed: int
    winner: str
    rounds: int
    dead_vertex: Optional[int]
    max_colored_phi_neighbors: Optional[int] = None
    fallback_events: Optional[int] = None
    decomposition_ok: Optional[bool] = None
    forfeit: Optional[str] = None
    trace: Optional[list[str]] = None

    def to_json(self) -> str:
        d = asdict(self)
        if d["trace"] is None:
            d.pop("trace")
        return json.dumps(d, sort_keys=True)


def load_hypergraph(cfg: ExperimentConfig) -> Hypergraph:
    if cfg.input_path:
        with open(cfg.input_path) as fh:
            return parse(fh.read())
    return generate_random(cfg.n, cfg.k, cfg.d, cfg.seed)


def _strategy(cfg: ExperimentConfig, name: str):
    if name == "alice:two-phase":
        return make_strategy(name, d=cfg.d, delta=cfg.delta)
    return make_strategy(name)


def run_trial(H: Hypergraph, cfg: ExperimentConfig, q: int, trial: int, fast: Optional[FastGame] = None) -> TrialRecord:
    seed = trial_seed(cfg.seed, trial, q)
    if supports(cfg.alice, cfg.bob):
        fast = fast or FastGame(H)
        winner, rounds, dead, rows = fast.play(q, seed, bob=cfg.bob, alice=cfg.alice, trace=cfg.trace)
        trace = None
        if cfg.trace:
            trace = [f"{i + 1} {'A' if i % 2 == 0 else 'B'} {v} {c} {a}" for i, (v, c, a) in enumerate(rows)]
        return TrialRecord(cfg.echo(), trial, q, seed, winner, rounds, dead, trace=trace)
    alice = _strategy(cfg, cfg.alice)
    bob = _strategy(cfg, cfg.bob)
    out = play_game(H, q, alice, bob, seed, trace=cfg.trace)
    st = out.stats.get("A", {})
    return TrialRecord(
        cfg.echo(), trial, q, seed, out.winner.value, out.rounds, out.dead_vertex,
        max_colored_phi_neighbors=st.get("max_colored_phi_neighbors"),
        fallback_events=st.get("fallback_events"),
        decomposition_ok=st.get("decomposition_ok"),
        forfeit=out.forfeit,
        trace=out.trace_lines() if cfg.trace else None,
    )


def _run_chunk(args):
    H, cfg, q, trials = args
    fast = FastGame(H) if supports(cfg.alice, cfg.bob) else None
    return [run_trial(H, cfg, q, t, fast) for t in trials]


def run_trials(H: Hypergraph, cfg: ExperimentConfig, q: int, workers: int = 1) -> list[TrialRecord]:
    """All trials for one q, ordered by trial index whatever the worker count."""
    idx = list(range(cfg.trials))
    if workers <= 1:
        return _run_chunk((H, cfg, q, idx))
    chunks = [idx[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(_run_chunk, [(H, cfg, q, ch) for ch in chunks]))
    records = [r for part in parts for r in part]
    return sorted(records, key=lambda r: r.trial)


@dataclass
class SweepRow:
    q: int
    trials: int
    a_wins: int

    @property
    def win_rate(self) -> float:
        return self.a_wins / self.trials


def sweep(H: Hypergraph, cfg: ExperimentConfig, workers: int = 1) -> list[SweepRow]:
    rows = []
    for q in sorted(cfg.q):
        recs = run_trials(H, cfg, q, workers)
        rows.append(SweepRow(q, len(recs), sum(r.winner == "A" for r in recs)))
    return rows


def sweep_csv(rows: list[SweepRow]) -> str:
    lines = ["q,trials,a_wins,win_rate"]
    lines.extend(f"{r.q},{r.trials},{r.a_wins},{r.win_rate:.6f}" for r in rows)
    return "\n".join(lines) + "\n"


def crossing_point(rows: list[SweepRow], level: float = 0.5) -> Optional[float]:
    """Linear interpolation of the first q where the win rate reaches ``level``."""
    prev = None
    for r in rows:
        if r.win_rate >= level:
            if prev is None or prev.win_rate >= level:
                return float(r.q)
            t = (level - prev.win_rate) / (r.win_rate - prev.win_rate)
            return prev.q + t * (r.q - prev.q)
        prev = r
    return None
