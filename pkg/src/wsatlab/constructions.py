"""Explicit weakly K_s-saturated subgraphs: the kernel construction and the
core-set construction, plus the path-power search both depend on."""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from . import kernels
from .config import Budget, default_budget
from .errors import BudgetExhausted, ConstructionInfeasible, DomainError
from .graph import Edge, Graph, common_mask, mask_of, members


@dataclass(frozen=True)
class PathPowerWitness:
    """Vertex order whose k-th path power lies in the ambient graph."""

    order: tuple[int, ...]
    k: int

    def validate(self, g: Graph) -> bool:
        order = self.order
        return len(set(order)) == len(order) and all(
            g.has_edge(order[i], order[j])
            for i in range(len(order))
            for j in range(i + 1, min(i + self.k, len(order) - 1) + 1)
        )


def power_ham_path(g: Graph, vertices: Iterable[int] | int, k: int,
                   budget: Optional[Budget] = None) -> Optional[PathPowerWitness]:
    """Find an ordering of ``vertices`` forming a k-th power of a Hamiltonian path in G[vertices].

    Returns ``None`` when no such ordering exists (including the empty set)
    and raises :class:`BudgetExhausted` when the backtracking budget runs out.
    """
    if k < 1:
        raise DomainError("path power k must be at least 1")
    budget = budget or default_budget()
    cand = vertices if isinstance(vertices, int) else mask_of(vertices)
    status, order, ext = kernels.power_path(g.rows, cand, k, budget.extensions)
    if status == kernels.EXHAUSTED:
        raise BudgetExhausted(f"path-power search exhausted after {ext} extensions")
    if status == kernels.ABSENT:
        return None
    return PathPowerWitness(tuple(order), k)


def iter_cliques(g: Graph, k: int, cand: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """All k-cliques inside ``cand`` in lexicographic order."""
    bits = g.bits
    if cand is None:
        cand = (1 << g.n) - 1

    def rec(prefix: tuple[int, ...], pool: int, need: int):
        if need == 0:
            yield prefix
            return
        while pool.bit_count() >= need:
            low = pool & -pool
            v = low.bit_length() - 1
            pool ^= low
            yield from rec(prefix + (v,), pool & bits[v], need - 1)

    yield from rec((), cand, k)


def _edges_between(a: Iterable[int], b: Iterable[int]) -> list[Edge]:
    return [(min(x, y), max(x, y)) for x in a for y in b]


@dataclass(frozen=True)
class Lemma1Construction:
    kernel: tuple[int, ...]
    H: Graph
    attachments: dict[int, tuple[int, ...]]
    s: int

    def to_dict(self) -> dict:
        return {
            "kind": "lemma1",
            "s": self.s,
            "kernel": list(self.kernel),
            "attachments": {str(v): list(xs) for v, xs in sorted(self.attachments.items())},
            "edges": [list(e) for e in self.H.edges()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def build_lemma1(g: Graph, s: int, budget: Optional[Budget] = None) -> Lemma1Construction:
    """Kernel construction with C(s-2, 2) + (n-s+2)(s-2) edges.

    The kernel is the lexicographically least (s-2)-clique with a nonempty
    common neighbourhood. Each vertex outside its closed neighbourhood is
    joined to the first s-2 vertices of a path-power order of
    F_v = G[N(kernel + v)].
    """
    if s < 3:
        raise DomainError("s must be at least 3")
    if g.n < s:
        raise DomainError(f"need n >= s, got n={g.n}, s={s}")
    budget = budget or default_budget()
    k = s - 2
    kernel = next((c for c in iter_cliques(g, k) if common_mask(g, c)), None)
    if kernel is None:
        raise ConstructionInfeasible(f"no {k}-clique with a common neighbour")
    nbhd = common_mask(g, kernel)
    edges: list[Edge] = [(a, b) for i, a in enumerate(kernel) for b in kernel[i + 1:]]
    edges += _edges_between(kernel, members(nbhd))
    closed = nbhd | mask_of(kernel)
    attachments: dict[int, tuple[int, ...]] = {}
    for v in range(g.n):
        if (closed >> v) & 1:
            continue
        f_v = nbhd & g.bits[v]
        if f_v.bit_count() < k:
            raise ConstructionInfeasible(
                f"vertex {v}: common neighbourhood with the kernel has {f_v.bit_count()} < {k} vertices",
                witness=v)
        try:
            wit = power_ham_path(g, f_v, k, budget)
        except BudgetExhausted as exc:
            raise BudgetExhausted(f"vertex {v}: {exc}") from None
        if wit is None:
            raise ConstructionInfeasible(f"vertex {v}: F_v has no {k}-th power of a Hamiltonian path",
                                         witness=v)
        attachments[v] = wit.order[:k]
        edges += [(min(v, x), max(v, x)) for x in wit.order[:k]]
    return Lemma1Construction(tuple(kernel), Graph.from_edges(g.n, edges), attachments, s)


def gamma_for(s: int) -> int:
    if s < 3:
        raise DomainError("s must be at least 3")
    return {3: 1, 4: 6}.get(s, 0)


def core_size_m(n: int, p: float, s: int, w: float) -> tuple[int, bool]:
    """Core size floor((ln n)^(gamma+s-2) / p^(s-1) * sqrt(w)); returns ``(m, clamped)``."""
    if n < 3 or not 0 < p < 1 or w <= 0:
        raise DomainError("need n >= 3, 0 < p < 1 and w > 0")
    value = math.log(n) ** (gamma_for(s) + s - 2) / p ** (s - 1) * math.sqrt(w)
    if value >= n:
        return n, True
    return math.floor(value), False


@dataclass(frozen=True)
class Theorem4Construction:
    X: range
    m: int
    H: Graph
    w: float
    gamma: int
    s: int
    clamped: bool
    attachments: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": "theorem4",
            "s": self.s,
            "X": [0, self.m],
            "m": self.m,
            "w": self.w,
            "gamma": self.gamma,
            "clamped": self.clamped,
            "attachments": {str(v): list(xs) for v, xs in sorted(self.attachments.items())},
            "edges": [list(e) for e in self.H.edges()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def build_theorem4(g: Graph, s: int, w: float, p: float,
                   budget: Optional[Budget] = None) -> Theorem4Construction:
    """Core-set construction on X = {0, ..., m-1}.

    H keeps every G-edge inside X and joins each vertex outside X to the first
    s-2 vertices of a path-power order of G[N(v) & X]. The pairwise condition
    on vertices outside X is not checked here.
    """
    if s < 3:
        raise DomainError("s must be at least 3")
    budget = budget or default_budget()
    k = s - 2
    m, clamped = core_size_m(g.n, p, s, w)
    if clamped:
        warnings.warn(f"core size clamped to n={g.n}; H = G and the bound is vacuous", stacklevel=2)
    core = (1 << m) - 1
    edges = [(u, v) for u, v in g.edges() if v < m]
    attachments: dict[int, tuple[int, ...]] = {}
    absent, exhausted = [], []
    for v in range(m, g.n):
        target = g.bits[v] & core
        if target.bit_count() < k:
            absent.append(v)
            continue
        try:
            wit = power_ham_path(g, target, k, budget)
        except BudgetExhausted:
            exhausted.append(v)
            continue
        if wit is None:
            absent.append(v)
            continue
        attachments[v] = wit.order[:k]
        edges += [(min(v, x), max(v, x)) for x in wit.order[:k]]
    if absent:
        raise ConstructionInfeasible(
            f"{len(absent)} vertices outside the core lack a {k}-th path power in their core neighbourhood",
            witness=absent)
    if exhausted:
        raise BudgetExhausted(f"path-power search exhausted for vertices {exhausted}")
    return Theorem4Construction(range(m), m, Graph.from_edges(g.n, edges), w, gamma_for(s), s,
                                clamped, attachments)
