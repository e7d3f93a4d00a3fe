"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s -q``; the lines are also
printed (uncaptured) in a normal run.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats

from hypercolor import checks
from hypercolor.analysis import eval_bounds
from hypercolor.experiment import ExperimentConfig, crossing_point, sweep
from hypercolor.hypergraph import generate_random


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, text: str):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")

    return emit


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def test_01_solver_oracle_equivalence(report):
    r, secs = timed(checks.check_solver, instances=200, seed=0)
    ok = r["holds"] and secs < 300
    report(1, ok, f"memoized vs plain search on 200 instances (n<=7, q<=3): "
                  f"{len(r['mismatches'])} mismatches, {secs:.1f}s")
    assert ok, r["mismatches"][:3]


def test_02_ground_truth(report):
    r = checks.check_ground_truth(instances=100, seed=1)
    vals = {rec["params"].get("instance", "chi_g>=chi"): rec["value"] for rec in r["records"]}
    report(2, r["holds"], f"fixtures {vals}")
    assert r["holds"], r["records"]


def test_03_engine_consistency(report):
    r, secs = timed(checks.check_engine, sequences=10 ** 5, seed=0)
    report(3, r["holds"], f"{r['sequences']} random sequences, {r['moves']} moves, "
                          f"{r['mismatches']} mismatches, {secs:.0f}s")
    assert r["holds"], r["first"]


def test_04_f_lower_bound(report):
    r, secs = timed(checks.check_f_lower, count=1000, seed=0)
    ok = r["holds"] and secs < 60
    report(4, ok, f"1000 random compositions, {len(r['violations'])} violations, {secs:.2f}s")
    assert ok, r["violations"]


def test_05_bins(report):
    r, secs = timed(checks.check_bins, trials=10 ** 6, seed=0)
    ok = r["holds"] and len(r["records"]) == 27 and secs < 300
    worst = max((rec["value"] - rec["bound"]) / rec["stderr"] if rec["stderr"] else -math.inf
                for rec in r["records"])
    cond = sum(1 for rec in r["records"] if rec["params"]["condition_on_positive"])
    report(5, ok, f"27 grid points x 1e6 samples, max (estimate-bound)/stderr = {worst:.1f}, "
                  f"{cond} points conditioned on B>=1, {secs:.0f}s")
    assert ok, [rec for rec in r["records"] if not rec["holds"]]


def test_06_chernoff(report):
    r, secs = timed(checks.check_chernoff, samples=10 ** 6, seed=0)
    ok = r["holds"] and len(r["records"]) == 9 and secs < 120
    report(6, ok, f"9 parameter points, all empirical tails within bound + 3 stderr, {secs:.1f}s"
           if ok else f"violations at {[rec['params'] for rec in r['records'] if not rec['holds']]}")
    assert ok


def test_07_formula_report(report):
    r = checks.check_formula(eps_values=(0.01, 0.1))
    errs = [max(rec["rel_err_float"], rec["rel_err_highprec"]) for rec in r["records"]]
    flagged = r["discrepancy"] and all("note" in rec for rec in r["records"])
    ok = r["holds"] and flagged
    report(7, ok, f"gap matches (-6e^2+6e^3)/(2 sqrt 2) at eps=0.01, 0.1 (max rel err {max(errs):.1e}); "
                  f"claimed inequality fails and is flagged: {flagged}")
    assert ok


def test_08_bound_formulas(report):
    r = checks.check_bounds()
    vals = {rec["params"]["field"]: (round(rec["value"], 6), round(rec["bound"], 6)) for rec in r["records"]}
    D, chi = vals["D"][0], vals["chi_est"][0]
    ok = r["holds"] and f"{D:.5g}" == "3.3476" and f"{chi:.5g}" == "4.7342"
    report(8, ok, f"D(e^6,3) = {D}, chi_est(e^6,3) = {chi} (vs high precision {vals})")
    assert ok


def test_09_game_statistics(report):
    t0 = time.perf_counter()
    H = generate_random(3000, 3, 100, seed=42)
    top = H.max_degree() + 1
    cfg = ExperimentConfig(n=3000, k=3, d=100, q=list(range(1, top + 1)), alice="greedy", bob="mirror",
                           trials=200, seed=42)
    rows = sweep(H, cfg)
    secs = time.perf_counter() - t0
    qs = [r.q for r in rows]
    rates = np.array([r.win_rate for r in rows])
    rho = stats.spearmanr(qs, rates).statistic
    x = crossing_point(rows)
    bp = eval_bounds(100, 3, eps=0.1, delta=0.1)
    between = x is not None and bp.lower_estimate <= x <= bp.ub
    # context for the rank statistic: largest drop between neighbors, and the
    # rho of an ideal 0/1 step placed at the observed crossing
    max_drop = float(max(0.0, -np.diff(rates).min()))
    step = (np.array(qs) > (x if x is not None else qs[-1])).astype(float)
    rho_step = stats.spearmanr(qs, step).statistic
    ok = rates[0] == 0 and rates[-1] == 1 and rho >= 0.8 and secs < 600
    report(9, ok, f"q=1..{top}: rate(1)={rates[0]:.2f}, rate(maxdeg+1)={rates[-1]:.2f}, Spearman {rho:.3f} "
                  f"(required >= 0.8; ideal step at the crossing gives {rho_step:.3f}; largest drop {max_drop:.3f}), "
                  f"50% crossing {x:.2f} (lower eval {bp.lower_estimate:.2f}, upper eval {bp.ub:.2f}, "
                  f"between: {between}), {secs:.0f}s")
    assert ok


def test_10_two_phase_instrumentation(report):
    r, secs = timed(checks.check_two_phase, successes=100, seed=0)
    rec = r["records"][0]
    report(10, r["holds"], f"{rec['verified_games']} verified games of {rec['games']} played, "
                           f"{rec['phase2_events']} phase-2 events, max colored Phi-neighbors {rec['value']}, "
                           f"{rec['fallback_events']} fallbacks, deterministic {rec['deterministic']}, {secs:.0f}s")
    assert r["holds"]


def test_11_density_predicates(report):
    r, secs = timed(checks.check_density, samples=10 ** 4, seed=0)
    planted, *random_runs = r["records"]
    ok = r["holds"]
    report(11, ok, f"planted core found: {planted['holds']}; random H(1000,3,20): "
                   f"{[int(x['value']) for x in random_runs]} violations over 1e4 samples each, {secs:.0f}s")
    assert ok
