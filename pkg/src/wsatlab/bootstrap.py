"""K_s-bootstrap closure, percolation tests and trace certificates."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Optional

from . import kernels
from .errors import ContainmentError, DomainError
from .graph import Edge, Graph, complete_graph, members

MAX_S = 12


@dataclass(frozen=True)
class BootstrapTrace:
    s: int
    host_id: str
    steps: tuple[tuple[Edge, tuple[int, ...]], ...] = field(default=())

    def __len__(self) -> int:
        return len(self.steps)

    def edges(self) -> list[Edge]:
        return [e for e, _ in self.steps]

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "host": self.host_id,
            "steps": [{"edge": list(e), "witness": list(w)} for e, w in self.steps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "BootstrapTrace":
        steps = tuple(
            ((int(st["edge"][0]), int(st["edge"][1])), tuple(int(x) for x in st["witness"]))
            for st in data["steps"]
        )
        return cls(int(data["s"]), str(data["host"]), steps)

    @classmethod
    def from_json(cls, text: str) -> "BootstrapTrace":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ClosureResult:
    closure: Graph
    trace: BootstrapTrace
    percolated: bool


@dataclass(frozen=True)
class TraceCheck:
    """Outcome of :func:`verify_trace`; truthy iff the trace is valid."""

    ok: bool
    bad_step: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_s(s: int) -> None:
    if not 3 <= s <= MAX_S:
        raise DomainError(f"clique order s must satisfy 3 <= s <= {MAX_S}, got {s}")


def _check_inputs(host: Graph, h: Graph, s: int) -> None:
    _check_s(s)
    if h.n != host.n:
        raise ContainmentError(f"subgraph has {h.n} vertices, host has {host.n}")
    if not h.is_subgraph_of(host):
        raise ContainmentError("subgraph has edges missing from the host")


def ks_closure(host: Graph, h: Graph, s: int) -> ClosureResult:
    """Saturate ``h`` inside ``host``: add host edges whose endpoints have
    ``s - 2`` pairwise adjacent common neighbours until none is left."""
    _check_inputs(host, h, s)
    rows, steps = kernels.closure(host.rows, h.rows, s)
    closure = Graph(host.n, rows, validate=False)
    trace = BootstrapTrace(s, host.fingerprint, tuple(((a, b), tuple(w)) for a, b, w in steps))
    return ClosureResult(closure, trace, closure.edge_count == host.edge_count)


def percolates(host: Graph, h: Graph, s: int) -> bool:
    return ks_closure(host, h, s).percolated


def weakly_saturated_in_complete(g: Graph, s: int) -> bool:
    """True iff ``g`` percolates in K_n; then wsat(g, K_s) >= wsat(K_n, K_s)."""
    return percolates(complete_graph(g.n), g, s)


def naive_closure(host: Graph, h: Graph, s: int, rng: Optional[random.Random] = None) -> Graph:
    """Reference closure by repeated full rescans, optionally in shuffled order.

    Independent of the worklist kernel; used as an oracle.
    """
    _check_inputs(host, h, s)
    cur = list(h.bits)
    missing = [e for e in host.edges() if not (cur[e[0]] >> e[1]) & 1]
    changed = True
    while changed:
        changed = False
        if rng is not None:
            rng.shuffle(missing)
        rest = []
        for u, v in missing:
            if _has_clique(cur, cur[u] & cur[v], s - 2):
                cur[u] |= 1 << v
                cur[v] |= 1 << u
                changed = True
            else:
                rest.append((u, v))
        missing = rest
    return Graph.from_bits(cur, host.n)


def _has_clique(bits, cand: int, k: int) -> bool:
    if k == 0:
        return True
    for v in members(cand):
        cand &= ~(1 << v)
        if _has_clique(bits, cand & bits[v], k - 1):
            return True
    return False


def verify_trace(host: Graph, h0: Graph, trace: BootstrapTrace) -> TraceCheck:
    """Replay ``trace`` from ``h0`` and check every step against the host."""
    if trace.s < 3:
        return TraceCheck(False, None, "trace order s < 3")
    if h0.n != host.n:
        return TraceCheck(False, None, "vertex counts differ")
    cur = list(h0.bits)
    n = host.n
    for i, ((u, v), wit) in enumerate(trace.steps):
        if not (0 <= u < n and 0 <= v < n) or u == v:
            return TraceCheck(False, i, f"edge ({u}, {v}) out of range")
        if not host.has_edge(u, v):
            return TraceCheck(False, i, f"edge ({u}, {v}) is not a host edge")
        if (cur[u] >> v) & 1:
            return TraceCheck(False, i, f"edge ({u}, {v}) already present")
        if len(wit) != trace.s - 2 or len(set(wit)) != len(wit):
            return TraceCheck(False, i, "witness has the wrong size")
        for a, w in enumerate(wit):
            if not (0 <= w < n) or w in (u, v):
                return TraceCheck(False, i, f"witness vertex {w} invalid")
            if not ((cur[w] >> u) & 1 and (cur[w] >> v) & 1):
                return TraceCheck(False, i, f"witness vertex {w} not adjacent to both endpoints")
            if any(not (cur[w] >> x) & 1 for x in wit[a + 1:]):
                return TraceCheck(False, i, "witness is not a clique")
        cur[u] |= 1 << v
        cur[v] |= 1 << u
    return TraceCheck(True)


def replay(h0: Graph, trace: BootstrapTrace) -> Graph:
    return h0.with_edges(trace.edges())
