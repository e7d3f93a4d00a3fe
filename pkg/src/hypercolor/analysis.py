"""Numerical checks of the bound formulas and probabilistic inequalities at desk scale."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

import mpmath
import numpy as np
from scipy import stats

from .hypergraph import Hypergraph


def record(check: str, params: dict, value, bound, holds: bool, stderr=None, **extra) -> dict:
    out = {"check": check, "params": params, "value": value, "bound": bound, "holds": bool(holds)}
    if stderr is not None:
        out["stderr"] = stderr
    out.update(extra)
    return out


# ----------------------------------------------------------------------
# parameter formulas

@dataclass(frozen=True)
class BoundParams:
    d: float
    k: int
    eps: float
    delta: float
    D: float
    alpha: float
    beta_lb: float
    gamma_lb: float
    theta_rounds: float
    chi_est: float
    ub: float

    @property
    def q_lower(self) -> float:
        """alpha * D, the color count in the lower-bound argument."""
        return self.alpha * self.D

    @property
    def lower_estimate(self) -> float:
        """(1 + eps) times the chromatic-number estimate."""
        return (1.0 + self.eps) * self.chi_est

    def as_dict(self) -> dict:
        out = asdict(self)
        out["q_lower"] = self.q_lower
        out["lower_estimate"] = self.lower_estimate
        return out


def _check_domain(d, k, eps, delta):
    if not d > 1:
        raise ValueError("need d > 1")
    if k < 3:
        raise ValueError("need k >= 3")
    if not 0 < eps < 0.5:
        raise ValueError("need 0 < eps < 1/2")
    if not delta > 0:
        raise ValueError("need delta > 0")


def eval_bounds(d: float, k: int = 3, eps: float = 0.1, delta: float = 0.1) -> BoundParams:
    _check_domain(d, k, eps, delta)
    r = 1.0 / (k - 1)
    root = (k - 1) ** r
    D = (d / (math.factorial(k) * math.log(d))) ** r
    alpha = (1 + eps) * root
    beta = (1 - 2 * eps) / (2 * root)
    gamma = eps / root
    theta = alpha * (2 * beta + gamma) / 2
    chi = (d / (k * math.factorial(k - 2) * math.log(d))) ** r
    ub = d ** (2.0 / 3.0 + delta)
    return BoundParams(d, k, eps, delta, D, alpha, beta, gamma, theta, chi, ub)


def eval_bounds_mp(d, k: int = 3, eps="0.1", delta="0.1", dps: int = 60) -> dict:
    """Same formulas in mpmath at ``dps`` digits; inputs may be strings or mpf."""
    with mpmath.workdps(dps):
        d, eps, delta = mpmath.mpf(d), mpmath.mpf(eps), mpmath.mpf(delta)
        r = mpmath.mpf(1) / (k - 1)
        root = mpmath.mpf(k - 1) ** r
        D = (d / (mpmath.factorial(k) * mpmath.log(d))) ** r
        alpha = (1 + eps) * root
        beta = (1 - 2 * eps) / (2 * root)
        gamma = eps / root
        return {
            "D": D,
            "alpha": alpha,
            "beta_lb": beta,
            "gamma_lb": gamma,
            "theta_rounds": alpha * (2 * beta + gamma) / 2,
            "chi_est": (d / (k * mpmath.factorial(k - 2) * mpmath.log(d))) ** r,
            "ub": d ** (mpmath.mpf(2) / 3 + delta),
        }


def formula_holds(beta: float, gamma: float, k: int) -> tuple[bool, float, float]:
    """``2(2b+g)^k - (2b)^k > 2(b+g)/(k-1)``; returns (holds, lhs, rhs)."""
    lhs = 2 * (2 * beta + gamma) ** k - (2 * beta) ** k
    rhs = 2 * (beta + gamma) / (k - 1)
    return lhs > rhs, lhs, rhs


def formula_gap_mp(beta, gamma, k: int, dps: int = 60):
    with mpmath.workdps(dps):
        b, g = mpmath.mpf(beta), mpmath.mpf(gamma)
        lhs = 2 * (2 * b + g) ** k - (2 * b) ** k
        rhs = 2 * (b + g) / (k - 1)
        return lhs, rhs


def formula_report(eps: float, k: int = 3) -> dict:
    """Evaluate the inequality at the lower-bound beta, gamma for this eps.

    For k = 3 the gap reduces to (-6 eps^2 + 6 eps^3) / (2 sqrt 2), which is
    negative on (0, 1): the inequality fails at every eps.
    """
    root = (k - 1) ** (1.0 / (k - 1))
    beta = (1 - 2 * eps) / (2 * root)
    gamma = eps / root
    holds, lhs, rhs = formula_holds(beta, gamma, k)
    with mpmath.workdps(60):
        e = mpmath.mpf(eps)
        rt = mpmath.mpf(k - 1) ** (mpmath.mpf(1) / (k - 1))
        lhs_mp, rhs_mp = formula_gap_mp((1 - 2 * e) / (2 * rt), e / rt, k)
        gap_mp = lhs_mp - rhs_mp
        closed = (-6 * e ** 2 + 6 * e ** 3) / (2 * mpmath.sqrt(2)) if k == 3 else None
    out = record(
        "formula", {"eps": eps, "k": k, "beta": beta, "gamma": gamma},
        lhs, rhs, holds,
        gap=lhs - rhs,
        gap_highprec=float(gap_mp),
    )
    if closed is not None:
        out["gap_closed_form"] = float(closed)
        c = float(closed)
        out["rel_err_float"] = abs((lhs - rhs) - c) / abs(c)
        out["rel_err_highprec"] = abs(float(gap_mp) - c) / abs(c)
        out["closed_form_match"] = bool(out["rel_err_float"] <= 1e-12 and out["rel_err_highprec"] <= 1e-12)
    if not holds:
        out["note"] = "inequality fails at the lower-bound parameters, contrary to the claim that it is satisfied"
    return out


# ----------------------------------------------------------------------
# f(C) lower bound

def f_lower_bound_check(comp: Sequence[int], p: float, rel_tol: float = 1e-12) -> dict:
    if not 0 < p < 1:
        raise ValueError("need 0 < p < 1")
    comp = [int(c) for c in comp]
    if any(c < 0 for c in comp) or not comp:
        raise ValueError("class sizes must be non-negative, at least one class")
    q = len(comp)
    n = sum(comp)
    lg = math.log1p(-p)
    x0 = math.sqrt(2.0 / -lg)
    f = math.fsum(math.exp(c * c / 2.0 * lg) for c in comp)
    if q * x0 <= n:
        bound = q * math.exp((n / q) ** 2 / 2.0 * lg)
        case = "qx0<=n"
    else:
        bound = q * math.exp(x0 * x0 / 2.0 * lg)
        case = "qx0>n"
    holds = f >= bound * (1 - rel_tol)
    return record("f_lower_bound", {"n": n, "q": q, "p": p}, f, bound, holds, x0=x0, case=case)


def random_composition(rng: np.random.Generator, n: int, q: int) -> list[int]:
    """Sizes of q classes summing to n, from a random mix of shapes."""
    kind = rng.integers(4)
    if kind == 0:
        probs = rng.dirichlet(np.ones(q))
    elif kind == 1:
        probs = rng.dirichlet(np.full(q, 0.1))
    elif kind == 2:
        probs = np.ones(q) / q
    else:
        probs = np.zeros(q)
        probs[rng.integers(q)] = 1.0
    return [int(x) for x in rng.multinomial(n, probs)]


# ----------------------------------------------------------------------
# binomial reciprocal-product bound

def bins_bound(v: int, rho: float, q: int) -> float:
    return 7.0 / rho ** q * math.prod(1.0 / (v + i) for i in range(1, q + 1))


def bins_exact(v: int, rho: float, q: int, condition_on_positive: bool = False) -> float:
    """E[prod 1/(B+i-1)] by summing the binomial pmf over B >= 1 (B >= 0 when q = 0)."""
    if q == 0:
        return 1.0
    b = np.arange(1, v + 1)
    pmf = stats.binom.pmf(b, v, rho)
    prod = np.ones_like(b, dtype=float)
    for i in range(1, q + 1):
        prod /= b + i - 1
    val = float(np.sum(pmf * prod))
    if condition_on_positive:
        val /= 1.0 - stats.binom.pmf(0, v, rho)
    return val


def bins_check(v: int, rho: float, q: int, trials: int = 10 ** 6, seed: int = 0,
               condition_on_positive: bool = False) -> dict:
    """Monte Carlo estimate of E[prod_{i<=q} 1/(B+i-1)] for B ~ Bin(v, rho) against 7 rho^-q prod 1/(v+i).

    The left side is infinite when P(B = 0) > 0 and q >= 1, so parameters
    with P(B = 0) >= 1e-12 are rejected unless ``condition_on_positive``, in
    which case B is drawn conditioned on B >= 1.
    """
    if not (v >= 1 and 0 < rho <= 1 and q >= 0):
        raise ValueError("need v >= 1, 0 < rho <= 1, q >= 0")
    if trials < 10 ** 5:
        raise ValueError("need at least 1e5 trials")
    p_zero = (1.0 - rho) ** v
    if q >= 1 and p_zero >= 1e-12 and not condition_on_positive:
        raise ValueError(f"P(B=0) = {p_zero:.3g} >= 1e-12: left side is infinite")
    bound = bins_bound(v, rho, q)
    params = {"v": v, "rho": rho, "q": q, "trials": trials, "seed": seed}
    if q == 0:
        return record("bins", params, 1.0, bound, 1.0 <= bound, 0.0, exact=1.0, p_zero=p_zero)
    rng = np.random.default_rng(seed)
    B = rng.binomial(v, rho, size=trials)
    if q >= 1:
        zero = B == 0
        while zero.any():
            if not condition_on_positive:
                raise RuntimeError("drew B = 0 despite negligible probability")
            B[zero] = rng.binomial(v, rho, size=int(zero.sum()))
            zero = B == 0
    vals = np.ones(trials)
    Bf = B.astype(float)
    for i in range(1, q + 1):
        vals /= Bf + i - 1
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(trials))
    params["condition_on_positive"] = condition_on_positive
    return record("bins", params, est, bound, est <= bound + 3 * se, se,
                  exact=bins_exact(v, rho, q, condition_on_positive), p_zero=p_zero)


# ----------------------------------------------------------------------
# Chernoff tails

def chernoff(mean: float, eps: float = 0.0, which: str = "lower", mu: Optional[float] = None) -> float:
    """Printed tail bound: ``lower`` P(X <= (1-e)np), ``upper1`` P(X >= (1+e)np), ``upper2`` P(X >= mu np)."""
    if mean < 0:
        raise ValueError("mean must be non-negative")
    if which == "lower":
        if eps < 0:
            raise ValueError("eps must be >= 0")
        return math.exp(-eps * eps * mean / 2.0)
    if which == "upper1":
        if not 0 <= eps <= 1:
            raise ValueError("upper1 needs 0 <= eps <= 1")
        return math.exp(-eps * eps * mean / 3.0)
    if which == "upper2":
        if mu is None or mu <= 0:
            raise ValueError("upper2 needs mu > 0")
        return (math.e / mu) ** (mu * mean)
    raise ValueError(f"unknown tail {which!r}")


def chernoff_check(n: int, p: float, which: str, eps: float = 0.0, mu: Optional[float] = None,
                   samples: int = 10 ** 6, seed: int = 0) -> dict:
    mean = n * p
    bound = chernoff(mean, eps, which, mu)
    X = np.random.default_rng(seed).binomial(n, p, size=samples)
    if which == "lower":
        hit = X <= (1 - eps) * mean
    elif which == "upper1":
        hit = X >= (1 + eps) * mean
    else:
        hit = X >= mu * mean
    f = float(hit.mean())
    se = math.sqrt(max(f * (1 - f), 0.0) / samples)
    exact = _binom_tail(n, p, which, eps, mu)
    params = {"n": n, "p": p, "which": which, "eps": eps, "mu": mu, "samples": samples, "seed": seed}
    return record("chernoff", params, f, bound, f <= bound + 3 * se, se, exact=exact)


def _binom_tail(n, p, which, eps, mu):
    mean = n * p
    if which == "lower":
        return float(stats.binom.cdf(math.floor((1 - eps) * mean + 1e-9), n, p))
    t = (1 + eps) * mean if which == "upper1" else mu * mean
    return float(stats.binom.sf(math.ceil(t - 1e-9) - 1, n, p))


# ----------------------------------------------------------------------
# B(C): vertices with few available colors under a full or partial coloring

def availability_counts(H: Hypergraph, classes: Sequence[Iterable[int]]) -> list[int]:
    """a(v, C) for every vertex: colors i with no edge {v, x, y}, x, y in C_i."""
    if H.k != 3:
        raise ValueError("defined for 3-uniform hypergraphs")
    sets = [set(c) for c in classes]
    color_of: dict[int, int] = {}
    for i, s in enumerate(sets):
        for v in s:
            if v in color_of:
                raise ValueError(f"vertex {v} is in two classes")
            if not 0 <= v < H.n:
                raise ValueError(f"vertex {v} out of range")
            color_of[v] = i
    q = len(sets)
    blocked: list[set[int]] = [set() for _ in range(H.n)]
    for e in H.edges:
        for v in e:
            x, y = (w for w in e if w != v)
            cx, cy = color_of.get(x), color_of.get(y)
            if cx is not None and cx == cy:
                blocked[v].add(cx)
    return [q - len(b) for b in blocked]


def b_set(H: Hypergraph, classes: Sequence[Iterable[int]], threshold: float) -> set[int]:
    a = availability_counts(H, classes)
    return {v for v in range(H.n) if a[v] < threshold}


# ----------------------------------------------------------------------
# density predicates

PREDICATES = ("L1", "L2", "L3", "L4")


def density_hypothesis(which: str, sigma: float, theta: float, d: float,
                     Delta: float = 0.0, tau: float = 0.0) -> bool:
    """Whether the parameter condition attached to each density predicate holds."""
    e = math.e
    if which == "L1":
        return theta > 1 and (sigma * e * d / (2 * theta)) ** theta <= sigma / (2 * e)
    if which == "L2":
        return theta > 0.5 and (sigma ** 2 * e * d / (6 * theta)) ** theta <= sigma / (2 * e)
    if which == "L3":
        x = (Delta - 2 * theta) * tau
        return density_hypothesis("L1", sigma, theta, d) and x > 1 and (sigma * e * d / x) ** x <= sigma / (4 * e)
    if which == "L4":
        x = (Delta - 3 * theta) * tau
        return density_hypothesis("L2", sigma, theta, d) and x > 1 and (sigma ** 2 * e * d / (2 * x)) ** x <= sigma / (4 * e)
    raise ValueError(f"unknown predicate {which!r}")


def max_sigma(which: str, theta: float, d: float) -> float:
    """Largest sigma in (0, 1] meeting the L1/L2 hypothesis (0 if none)."""
    if not density_hypothesis(which, 1e-300, theta, d):
        return 0.0
    if density_hypothesis(which, 1.0, theta, d):
        return 1.0
    lo, hi = 1e-300, 1.0
    for _ in range(2000):
        mid = math.sqrt(lo * hi) if hi / lo > 4 else (lo + hi) / 2
        if density_hypothesis(which, mid, theta, d):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return lo


class _Arrays:
    def __init__(self, H: Hypergraph):
        if H.k != 3:
            raise ValueError("density predicates are for 3-uniform hypergraphs")
        self.H = H
        self.E = np.array(H.edges, dtype=np.int64).reshape(-1, 3)


def _violation(which, inS, A: _Arrays, theta, Delta, tau):
    """Witness info if S (boolean membership) violates the predicate, else None."""
    E = A.E
    s = int(inS.sum())
    if s == 0 or len(E) == 0:
        return None
    mem = inS[E]
    cnt = mem.sum(axis=1)
    if which == "L2":
        e3 = int((cnt == 3).sum())
        return {"size": s, "e3": e3} if e3 >= theta * s else None
    if which == "L1":
        rows = E[cnt == 2]
        m2 = mem[cnt == 2]
        if len(rows) == 0:
            return None
        pair = np.sort(np.where(m2, rows, -1), axis=1)[:, 1:]
        e2 = len(np.unique(pair[:, 0] * A.H.n + pair[:, 1]))
        return {"size": s, "e2": e2} if e2 >= theta * s else None
    j = 1 if which == "L3" else 2
    deg = np.zeros(A.H.n, dtype=np.int64)
    for col in range(3):
        others = cnt - mem[:, col]
        np.add.at(deg, E[others == j, col], 1)
    T = np.flatnonzero(inS & (deg >= Delta))
    if len(T) >= tau * s and len(T) > 0:
        return {"size": s, "T": [int(x) for x in T[:20]], "t": int(len(T))}
    return None


def density_predicate_check(H: Hypergraph, which: str, sigma: float, theta: float,
                            Delta: float = 0.0, tau: float = 0.0, mode: str = "exhaustive",
                            trials: int = 10 ** 4, seed: int = 0, max_witnesses: int = 10) -> list[dict]:
    """Search for sets S (|S| <= sigma n) violating a density predicate.

    ``exhaustive`` enumerates every S (n <= 15). ``sampled`` draws ``trials``
    random sets with a uniform size in [1, floor(sigma n)]; for L3/L4 the set
    T is taken as every vertex of S meeting the degree threshold.
    """
    if which not in PREDICATES:
        raise ValueError(f"unknown predicate {which!r}")
    A = _Arrays(H)
    n = H.n
    smax = min(n, int(math.floor(sigma * n)))
    found: list[dict] = []
    if mode == "exhaustive":
        if n > 15:
            raise ValueError("exhaustive search is limited to n <= 15")
        for size in range(1, smax + 1):
            for S in combinations(range(n), size):
                inS = np.zeros(n, dtype=bool)
                inS[list(S)] = True
                w = _violation(which, inS, A, theta, Delta, tau)
                if w is not None:
                    w["S"] = list(S)
                    found.append(w)
                    if len(found) >= max_witnesses:
                        return found
        return found
    if mode != "sampled":
        raise ValueError("mode is 'exhaustive' or 'sampled'")
    if smax < 1:
        return found
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        size = int(rng.integers(1, smax + 1))
        inS = np.zeros(n, dtype=bool)
        inS[rng.choice(n, size=size, replace=False)] = True
        w = _violation(which, inS, A, theta, Delta, tau)
        if w is not None:
            w["S"] = [int(x) for x in np.flatnonzero(inS)[:50]]
            found.append(w)
            if len(found) >= max_witnesses:
                break
    return found
