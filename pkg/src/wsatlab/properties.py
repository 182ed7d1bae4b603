"""Finite-n deciders for EXT, HAM, B_s and B*_s, and the witness count mu."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

from . import kernels
from .config import Budget, default_budget
from .constructions import power_ham_path
from .errors import BudgetExhausted, DomainError
from .graph import Graph, common_mask, contains_clique, members


@dataclass(frozen=True)
class PropertyReport:
    property: str
    holds: bool
    failure_witness: Optional[tuple[int, ...]] = None
    undecided: tuple[tuple[int, ...], ...] = ()
    counts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "holds": self.holds,
            "witness": list(self.failure_witness) if self.failure_witness is not None else None,
            "undecided": [list(c) for c in self.undecided],
            "counts": dict(self.counts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _need(s: int) -> None:
    if s < 3:
        raise DomainError("s must be at least 3")


def check_EXT(g: Graph, s: int) -> PropertyReport:
    """Every s-set has s-2 pairwise adjacent common neighbours."""
    _need(s)
    if g.n < s:
        raise DomainError(f"EXT needs n >= s, got n={g.n}")
    viol, first = kernels.set_scan(g.rows, s, s - 2, clique_sets=False, stop_first=True)
    return PropertyReport("EXT", viol == 0, first)


def ham_cell(g: Graph, subset, s: int, budget: Budget):
    """Decide one HAM cell; returns True, False or None (budget exhausted)."""
    nbhd = common_mask(g, subset)
    if nbhd.bit_count() < max(1, s - 2):
        return False
    try:
        return power_ham_path(g, nbhd, s - 2, budget) is not None
    except BudgetExhausted:
        return None


def check_HAM(g: Graph, s: int, budget: Optional[Budget] = None, max_n: Optional[int] = None) -> PropertyReport:
    """Every (s-1)-set's common neighbourhood contains an (s-2)-th power of a Hamiltonian path.

    Neighbourhoods with fewer than s-2 vertices fail (an empty one always
    fails, a singleton passes when s = 3).
    """
    _need(s)
    if g.n < s - 1:
        raise DomainError(f"HAM needs n >= s-1, got n={g.n}")
    budget = budget or default_budget()
    cap = max_n if max_n is not None else {3: budget.ham_max_n_s3, 4: budget.ham_max_n_s4}.get(s, budget.ham_max_n_s4)
    if g.n > cap:
        raise DomainError(f"HAM check capped at n <= {cap} for s={s}; got n={g.n}")
    undecided = []
    searched = 0
    smallest = None
    for subset in itertools.combinations(range(g.n), s - 1):
        size = common_mask(g, subset).bit_count()
        smallest = size if smallest is None else min(smallest, size)
        searched += 1
        verdict = ham_cell(g, subset, s, budget)
        if verdict is None:
            undecided.append(subset)
        elif not verdict:
            return PropertyReport("HAM", False, subset, tuple(undecided),
                                  {"searched": searched, "witness_neighborhood_size": size})
    return PropertyReport("HAM", not undecided, None, tuple(undecided),
                          {"searched": searched, "min_neighborhood_size": smallest})


def check_Bs(g: Graph, s: int, stop_first: bool = False) -> PropertyReport:
    """Every edge lies in a K_s; ``counts['N_s']`` is the number of edges that do not."""
    _need(s)
    viol, first = kernels.set_scan(g.rows, 2, s - 2, clique_sets=True, stop_first=stop_first)
    counts = {} if stop_first else {"N_s": viol}
    return PropertyReport("B_s", viol == 0, first, (), counts)


def check_Bstar(g: Graph, s: int, stop_first: bool = False) -> PropertyReport:
    """Every vertex pair has s-2 pairwise adjacent common neighbours."""
    _need(s)
    viol, first = kernels.set_scan(g.rows, 2, s - 2, clique_sets=False, stop_first=stop_first)
    counts = {} if stop_first else {"violating_pairs": viol}
    return PropertyReport("B*_s", viol == 0, first, (), counts)


def mu(g: Graph, u: int, v: int, s: int) -> int:
    """Number of (s-2)-sets W outside {u, v} that span a clique joined to both u and v."""
    _need(s)
    if u == v:
        raise DomainError("mu needs distinct vertices")
    return kernels.count_cliques(g.rows, g.bits[u] & g.bits[v], s - 2)


def edges_without_clique(g: Graph, s: int) -> list[tuple[int, int]]:
    """Edges of ``g`` contained in no copy of K_s (the edges counted by N_s)."""
    return [(u, v) for u, v in g.edges()
            if contains_clique(g, members(g.bits[u] & g.bits[v]), s - 2) is None]
