"""Exact weak saturation numbers and the tri-state decision for A_s."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .bootstrap import (BootstrapTrace, _check_s, ks_closure, verify_trace,
                        weakly_saturated_in_complete)
from .config import Budget, default_budget
from .constructions import build_lemma1
from .errors import BudgetExhausted, ConstructionInfeasible, DomainError, WsatlabError
from .graph import Edge, Graph, count_cliques, ints_to_rows
from .properties import edges_without_clique


def lovasz_number(n: int, s: int) -> int:
    """wsat(K_n, K_s) = C(s-2, 2) + (n-s+2)(s-2)."""
    if s < 3:
        raise DomainError("s must be at least 3")
    if n < s - 2:
        raise DomainError(f"need n >= s-2, got n={n}, s={s}")
    return math.comb(s - 2, 2) + (n - s + 2) * (s - 2)


def mandatory_edges(host: Graph, s: int) -> list[Edge]:
    """Host edges lying in no K_s; every weakly K_s-saturated subgraph keeps them."""
    _check_s(s)
    return edges_without_clique(host, s)


@dataclass(frozen=True)
class WsatResult:
    value: int
    witness: Graph
    trace: BootstrapTrace
    exact: bool
    nodes: int = 0
    candidates: int = 0
    elapsed: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        stats = {"nodes": self.nodes, "candidates": self.candidates}
        if timing:
            stats["elapsed_seconds"] = self.elapsed
        return {
            "value": self.value,
            "exact": self.exact,
            "edges": [list(e) for e in self.witness.edges()],
            "trace": self.trace.to_dict(),
            "stats": stats,
        }

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing))


def _closes_clique(bits: list[int], u: int, v: int, k: int) -> bool:
    cand = bits[u] & bits[v]
    if cand.bit_count() < k:
        return False
    return _has_k(bits, cand, k)


def _has_k(bits, cand: int, k: int) -> bool:
    if k == 0:
        return True
    while cand.bit_count() >= k:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        if _has_k(bits, cand & bits[v], k - 1):
            return True
    return False


def greedy_witness(host: Graph, s: int) -> Graph:
    """A K_s-free percolating subgraph: strip one edge from a K_s until none is left.

    Removing an edge that lies in a K_s never breaks percolation, because the
    closure immediately restores it.
    """
    from .graph import contains_clique

    h = host
    while True:
        clique = contains_clique(h, range(h.n), s)
        if clique is None:
            return h
        h = h.without_edges([(clique[0], clique[1])])


class _Stop(Exception):
    pass


def wsat_exact(host: Graph, s: int, budget: Optional[Budget] = None,
               require_ks_free: bool = True, lovasz_bound: bool = True) -> WsatResult:
    """Minimum size of a spanning, K_s-free subgraph percolating in ``host``.

    Sizes are tried upward from a proven lower bound; at each size the subsets
    containing every mandatory edge are enumerated in lexicographic order, so
    the reported witness is the lexicographically least optimum.
    ``require_ks_free=False`` drops the K_s-freeness requirement;
    ``lovasz_bound=False`` starts from the mandatory-edge count alone, so
    minimality is proven by exhaustion without appeal to the closed form.
    """
    _check_s(s)
    budget = budget or default_budget()
    if host.edge_count > budget.max_exact_edges:
        raise DomainError(f"host has {host.edge_count} edges; exact search bound is {budget.max_exact_edges}")
    t0 = time.perf_counter()
    empty = BootstrapTrace(s, host.fingerprint)
    if count_cliques(host, s) == 0:
        return WsatResult(host.edge_count, host, empty, True, elapsed=time.perf_counter() - t0)

    mandatory = mandatory_edges(host, s)
    mset = set(mandatory)
    optional = [e for e in host.edges() if e not in mset]
    lower = len(mandatory)
    if lovasz_bound and require_ks_free and weakly_saturated_in_complete(host, s):
        lower = max(lower, lovasz_number(host.n, s))
    fallback = greedy_witness(host, s)
    k = s - 2
    nodes = candidates = 0

    min_deg = [min(b.bit_count(), k) for b in host.bits]
    base = [0] * host.n
    for u, v in mandatory:
        base[u] |= 1 << v
        base[v] |= 1 << u

    def search(size: int) -> Optional[list[Edge]]:
        nonlocal nodes, candidates
        need = size - len(mandatory)
        chosen: list[Edge] = []
        bits = list(base)

        def rec(start: int) -> Optional[list[Edge]]:
            nonlocal nodes, candidates
            if len(chosen) == need:
                candidates += 1
                if candidates > budget.candidates or ((candidates & 1023) == 0 and
                                                      time.perf_counter() - t0 > budget.seconds):
                    raise _Stop
                # a vertex that must gain an edge needs s-2 neighbours first
                if any(b.bit_count() < floor for b, floor in zip(bits, min_deg)):
                    return None
                rows, _ = kernels.closure(host.rows, ints_to_rows(bits, host.n), s)
                return list(chosen) if np.array_equal(rows, host.rows) else None
            for i in range(start, len(optional) - (need - len(chosen)) + 1):
                u, v = optional[i]
                nodes += 1
                if require_ks_free and _closes_clique(bits, u, v, k):
                    continue
                bits[u] |= 1 << v
                bits[v] |= 1 << u
                chosen.append((u, v))
                found = rec(i + 1)
                chosen.pop()
                bits[u] &= ~(1 << v)
                bits[v] &= ~(1 << u)
                if found is not None:
                    return found
            return None

        return rec(0)

    best: Optional[Graph] = None
    exact = False
    try:
        for size in range(lower, host.edge_count + 1):
            found = search(size)
            if found is not None:
                best = Graph.from_edges(host.n, mandatory + found)
                exact = True
                break
    except _Stop:
        best = fallback
    if best is None:
        raise WsatlabError("exact search ended without a percolating witness")
    result = ks_closure(host, best, s)
    if not result.percolated:
        raise WsatlabError("internal error: reported witness does not percolate")
    return WsatResult(best.edge_count, best, result.trace, exact, nodes, candidates,
                      time.perf_counter() - t0)


@dataclass(frozen=True)
class AsVerdict:
    verdict: str  # "holds" | "fails" | "unknown"
    lower_certificate: Optional[bool] = None
    upper_certificate: Optional[dict] = None
    reason: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "lower_certificate": self.lower_certificate,
            "upper_certificate": self.upper_certificate,
            "reason": self.reason,
            "details": dict(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def decide_As(g: Graph, s: int, budget: Optional[Budget] = None) -> AsVerdict:
    """Decide whether wsat(g, K_s) equals the Lovász number, with certificates.

    ``holds``: g percolates in K_n (lower bound) and the kernel construction
    yields a K_s-free percolating subgraph of exactly that size (upper bound).
    ``fails``: an edge e in no K_s with g - e still percolating in K_n (every
    weakly saturated subgraph keeps e, so wsat exceeds the Lovász number), or
    an exact solve with a different value. ``unknown`` otherwise.
    """
    _check_s(s)
    if g.n < s:
        raise DomainError(f"need n >= s, got n={g.n}, s={s}")
    budget = budget or default_budget()
    target = lovasz_number(g.n, s)
    lower = weakly_saturated_in_complete(g, s)
    notes = []

    if lower:
        try:
            cons = build_lemma1(g, s, budget)
        except ConstructionInfeasible as exc:
            notes.append(f"construction infeasible: {exc}")
        except BudgetExhausted as exc:
            notes.append(f"construction budget: {exc}")
        else:
            closure = ks_closure(g, cons.H, s)
            if (closure.percolated and cons.H.edge_count == target
                    and count_cliques(cons.H, s) == 0
                    and verify_trace(g, cons.H, closure.trace)):
                return AsVerdict("holds", True,
                                 {"construction": cons.to_dict(), "trace": closure.trace.to_dict()},
                                 "percolates in K_n and the kernel construction percolates at the Lovász size")
            notes.append("kernel construction does not percolate")

    for e in mandatory_edges(g, s):
        if weakly_saturated_in_complete(g.without_edges([e]), s):
            return AsVerdict("fails", lower, None,
                             f"edge {e} lies in no K_s and G - e percolates in K_n",
                             {"edge": list(e)})

    if g.edge_count <= budget.max_exact_edges:
        res = wsat_exact(g, s, budget)
        upper = {"edges": [list(e) for e in res.witness.edges()], "trace": res.trace.to_dict()}
        if res.exact:
            verdict = "holds" if res.value == target else "fails"
            return AsVerdict(verdict, lower, upper, f"exact solve gives {res.value}, Lovász number {target}",
                             {"value": res.value})
        if res.value < target:
            return AsVerdict("fails", lower, upper, f"percolating K_s-free subgraph with {res.value} < {target} edges",
                             {"value": res.value})
        notes.append("exact search budget exhausted")
    return AsVerdict("unknown", lower, None, "; ".join(notes) or "no certificate found")
