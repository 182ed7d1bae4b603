"""Closed-form threshold quantities and seeded Monte Carlo estimation."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Callable, Optional, Sequence

from .bootstrap import weakly_saturated_in_complete
from .config import Budget, default_budget
from .constructions import gamma_for
from .errors import DomainError
from .graph import Graph, generate_gnp
from .properties import check_Bs, check_Bstar, check_EXT, check_HAM
from .seeding import Seed, as_seed

EXACT_BINOM_LIMIT = 1000
SMALL_K = 64


def beta_for(s: int, epsilon: float = 0.0) -> float:
    """Log-factor exponent of the refined upper threshold for K_s."""
    if s < 3:
        raise DomainError("s must be at least 3")
    return {3: 1 / 3 + epsilon, 4: 8 / 5}.get(s, 1 / 2)


def _exact(n: int, k: int) -> bool:
    return n <= EXACT_BINOM_LIMIT or min(k, n - k) <= SMALL_K


def log_binom(n: int, k: int) -> float:
    if k < 0 or k > n:
        return -math.inf
    if _exact(n, k):
        # math.log accepts arbitrarily large ints, so this never overflows
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def binom(n: int, k: int) -> float:
    if k < 0 or k > n:
        return 0.0
    if n <= EXACT_BINOM_LIMIT:
        return float(math.comb(n, k))
    return math.exp(log_binom(n, k))


def _check(n: int, s: int) -> None:
    if s < 3:
        raise DomainError("s must be at least 3")
    if n < 3:
        raise DomainError("n must be at least 3")


def q_s(n: float, s: int) -> float:
    """n^(-2/(s+1)) (ln n)^(2/((s-2)(s+1)))."""
    if s < 3:
        raise DomainError("s must be at least 3")
    if n <= 1:
        raise DomainError("n must exceed 1")
    return n ** (-2 / (s + 1)) * math.log(n) ** (2 / ((s - 2) * (s + 1)))


def c_s(s: int) -> float:
    if s < 3:
        raise DomainError("s must be at least 3")
    return (2 * (1 - 1 / (s + 1)) * math.factorial(s - 2)) ** (2 / ((s + 1) * (s - 2)))


def q_star(n: float, s: int) -> float:
    return (2 * math.factorial(s - 2)) ** (2 / ((s + 1) * (s - 2))) * q_s(n, s)


def _clique_exponent(s: int) -> float:
    return (s + 1) * (s - 2) / 2


def lambda_janson(n: int, p: float, s: int) -> float:
    """C(n-2, s-2) p^((s+1)(s-2)/2): expected number of K_s extensions of a fixed edge."""
    if s < 3:
        raise DomainError("s must be at least 3")
    if p == 0:
        return 0.0
    return math.exp(log_binom(n - 2, s - 2) + _clique_exponent(s) * math.log(p))


def delta_janson(n: int, p: float, s: int) -> float:
    """Sum over overlapping extension pairs; an empty sum for s = 3."""
    if s < 3:
        raise DomainError("s must be at least 3")
    if p == 0:
        return 0.0
    total = 0.0
    lp = math.log(p)
    for ell in range(1, s - 2):
        total += math.exp(log_binom(n - 2, s - 2) + log_binom(s - 2, ell) + log_binom(n - s, s - 2 - ell)
                          + ((s + 1) * (s - 2) - (ell + 3) * ell / 2) * lp)
    return total


def expected_Ns(n: int, p: float, s: int) -> tuple[float, tuple[float, float]]:
    """Expected number of edges of G(n, p) in no K_s, with a rigorous bracket.

    s = 3 is exact. For s >= 4 the point uses exp(-lambda); the bracket is the
    Harris product bound (1 - pi)^C(n-2, s-2) below and exp(-lambda + Delta/2)
    above, the latter capped at probability one.
    """
    if s < 3:
        raise DomainError("s must be at least 3")
    base = binom(n, 2) * p
    if s == 3:
        point = base * (1 - p * p) ** (n - 2)
        return point, (point, point)
    lam = lambda_janson(n, p, s)
    delta = delta_janson(n, p, s)
    pi = p ** _clique_exponent(s)
    point = base * math.exp(-lam)
    if pi >= 1:
        lo = 0.0
    else:
        lo = base * math.exp(binom(n - 2, s - 2) * math.log1p(-pi))
    hi = base * math.exp(min(0.0, -lam + delta / 2))
    return point, (lo, hi)


def lemma2_p(n: int, s: int, w: float) -> float:
    """c_s q_s(n) [1 + 2 ln ln n / ((s-2)^2 (s^2+s) ln n) + w / ln n]."""
    if n < 16:
        raise DomainError("n must be at least 16 so that ln ln n is positive")
    if s < 3:
        raise DomainError("s must be at least 3")
    ln = math.log(n)
    return c_s(s) * q_s(n, s) * (1 + 2 * math.log(ln) / ((s - 2) ** 2 * (s * s + s) * ln) + w / ln)


def theorem4_bound(n: int, p: float, s: int, w: float) -> float:
    """n(s-2) + w (ln n)^(2(gamma+s-2)) / p^(2s-3)."""
    _check(n, s)
    if not 0 < p < 1:
        raise DomainError("p must lie in (0, 1)")
    g = gamma_for(s)
    return n * (s - 2) + w * math.log(n) ** (2 * (g + s - 2)) / p ** (2 * s - 3)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials <= 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


# property registry ---------------------------------------------------------

def _as_outcome(g: Graph, s: int, budget: Budget) -> Optional[bool]:
    from .wsat import decide_As

    verdict = decide_As(g, s, budget).verdict
    return {"holds": True, "fails": False}.get(verdict)


def _ham_outcome(g: Graph, s: int, budget: Budget) -> Optional[bool]:
    rep = check_HAM(g, s, budget)
    if rep.failure_witness is not None:
        return False
    return None if rep.undecided else True


PROPERTIES: dict[str, Callable[[Graph, int, Budget], Optional[bool]]] = {
    "bs": lambda g, s, b: check_Bs(g, s, stop_first=True).holds,
    "bstar": lambda g, s, b: check_Bstar(g, s, stop_first=True).holds,
    "ext": lambda g, s, b: check_EXT(g, s).holds,
    "ham": _ham_outcome,
    "wsat_kn": lambda g, s, b: weakly_saturated_in_complete(g, s),
    "as": _as_outcome,
    "nonempty": lambda g, s, b: g.edge_count > 0,
}
MONOTONE = {"bs", "bstar", "wsat_kn", "nonempty"}


def trial_seed(master: int, n: int, trial: int) -> Seed:
    """Seed of one trial. It does not depend on p, so all p-points of a sweep
    share draws and an increasing property can only gain successes as p grows."""
    return Seed(master).child("n", n).child("trial", trial)


def _run_trial(task) -> Optional[bool]:
    prop, n, p, s, master, trial, budget = task
    g = generate_gnp(n, p, trial_seed(master, n, trial))
    return PROPERTIES[prop](g, s, budget)


def _run_block(tasks) -> list:
    return [_run_trial(t) for t in tasks]


def _evaluate(tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) < 2:
        return _run_block(tasks)
    chunk = max(1, math.ceil(len(tasks) / (workers * 4)))
    blocks = [tasks[i:i + chunk] for i in range(0, len(tasks), chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        out = []
        for block in pool.map(_run_block, blocks):
            out.extend(block)
    return out


@dataclass(frozen=True)
class SweepCell:
    n: int
    p: float
    trials: int
    successes: int
    undecided: int
    lo: float
    hi: float

    @property
    def fraction(self) -> float:
        decided = self.trials - self.undecided
        return self.successes / decided if decided else math.nan


CSV_COLUMNS = ["n", "p", "trials", "successes", "lo", "hi", "undecided"]


def _cells_csv(cells: Sequence[SweepCell]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for c in cells:
        writer.writerow([c.n, repr(c.p), c.trials, c.successes, repr(c.lo), repr(c.hi), c.undecided])
    return buf.getvalue()


def _cell_dict(c: SweepCell) -> dict:
    return {"n": c.n, "p": c.p, "trials": c.trials, "successes": c.successes,
            "lo": c.lo, "hi": c.hi, "undecided": c.undecided}


@dataclass(frozen=True)
class SweepResult:
    property: str
    s: int
    master_seed: int
    confidence: float
    cells: tuple[SweepCell, ...]

    def to_dict(self) -> dict:
        return {"property": self.property, "s": self.s, "master_seed": self.master_seed,
                "confidence": self.confidence, "cells": [_cell_dict(c) for c in self.cells]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self) -> str:
        return _cells_csv(self.cells)


def _cell(prop, n, p, s, trials, master, budget, workers, confidence) -> SweepCell:
    tasks = [(prop, n, p, s, master, t, budget) for t in range(trials)]
    outcomes = _evaluate(tasks, workers)
    succ = sum(1 for o in outcomes if o is True)
    und = sum(1 for o in outcomes if o is None)
    lo, hi = wilson_interval(succ, trials - und, confidence)
    return SweepCell(n, float(p), trials, succ, und, lo, hi)


def _resolve(prop: str) -> str:
    if prop not in PROPERTIES:
        raise DomainError(f"unknown property {prop!r}; choose from {sorted(PROPERTIES)}")
    return prop


def sweep_property(ns: Sequence[int], ps: Sequence[float], s: int, trials: int, seed: int | Seed,
                   prop: str, budget: Optional[Budget] = None, workers: int = 1,
                   confidence: float = 0.95) -> SweepResult:
    """Estimate P(property) on every (n, p) cell with ``trials`` seeded graphs."""
    if trials < 1:
        raise DomainError("trials must be at least 1")
    _resolve(prop)
    budget = budget or default_budget()
    master = as_seed(seed).value
    cells = tuple(_cell(prop, n, p, s, trials, master, budget, workers, confidence)
                  for n in ns for p in ps)
    return SweepResult(prop, s, as_seed(seed).master, confidence, cells)


@dataclass(frozen=True)
class ThresholdEstimate:
    n: int
    property: str
    s: int
    p_half: float
    bracket: tuple[float, float]
    trials_per_point: int
    evaluations: tuple[SweepCell, ...] = field(default=())

    def to_dict(self) -> dict:
        return {"n": self.n, "property": self.property, "s": self.s, "p_half": self.p_half,
                "bracket": list(self.bracket), "trials_per_point": self.trials_per_point,
                "evaluations": [_cell_dict(c) for c in self.evaluations]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self) -> str:
        return _cells_csv(self.evaluations)


class NonBracketingError(DomainError):
    pass


def estimate_threshold(n: int, s: int, prop: str, trials: int, tolerance: float, seed: int | Seed,
                       lo: float = 0.0, hi: float = 1.0, budget: Optional[Budget] = None,
                       workers: int = 1, confidence: float = 0.95) -> ThresholdEstimate:
    """Bisect for the p where the estimated success probability crosses 1/2."""
    _resolve(prop)
    if prop not in MONOTONE:
        raise DomainError(f"bisection needs an increasing property; {prop!r} is not one of {sorted(MONOTONE)}")
    if trials < 1 or tolerance <= 0 or not 0 <= lo < hi <= 1:
        raise DomainError("need trials >= 1, tolerance > 0 and 0 <= lo < hi <= 1")
    budget = budget or default_budget()
    master = as_seed(seed).value
    evals = []

    def at(p: float) -> float:
        cell = _cell(prop, n, p, s, trials, master, budget, workers, confidence)
        evals.append(cell)
        return cell.fraction

    f_lo, f_hi = at(lo), at(hi)
    if not (f_lo <= 0.5 <= f_hi):
        raise NonBracketingError(f"initial interval [{lo}, {hi}] does not bracket 1/2 "
                                 f"(success {f_lo:.3f} .. {f_hi:.3f})")
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if at(mid) >= 0.5:
            hi = mid
        else:
            lo = mid
    return ThresholdEstimate(n, prop, s, (lo + hi) / 2, (lo, hi), trials, tuple(evals))
