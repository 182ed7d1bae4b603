"""Bitset graphs, generators and neighborhood/clique primitives."""
from __future__ import annotations

import hashlib
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .errors import DomainError, EdgeListError
from .seeding import Seed, as_seed

MAX_VERTICES = 1 << 16

Edge = tuple[int, int]


def words_for(n: int) -> int:
    return max(1, (n + 63) // 64)


def ints_to_rows(ints: Iterable[int], n: int) -> np.ndarray:
    w = words_for(n)
    rows = np.zeros((n, w), dtype=np.uint64)
    for v, x in enumerate(ints):
        if x:
            rows[v] = np.frombuffer(x.to_bytes(8 * w, "little"), dtype="<u8")
    return rows


def rows_to_ints(rows: np.ndarray) -> tuple[int, ...]:
    return tuple(int.from_bytes(r.astype("<u8").tobytes(), "little") for r in rows)


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Graph:
    """Undirected simple graph on ``0..n-1`` stored as 64-bit-word bit rows.

    Instances are immutable: the row array is marked read-only.
    """

    __slots__ = ("n", "rows", "__dict__")

    def __init__(self, n: int, rows: np.ndarray, *, validate: bool = True):
        if n < 0:
            raise DomainError("vertex count must be non-negative")
        if n > MAX_VERTICES:
            raise DomainError(f"n={n} exceeds the configured limit {MAX_VERTICES}")
        rows = np.ascontiguousarray(rows, dtype=np.uint64)
        if rows.shape != (n, words_for(n)):
            raise DomainError(f"row array has shape {rows.shape}, expected {(n, words_for(n))}")
        if validate:
            bits = rows_to_ints(rows)
            for v, x in enumerate(bits):
                if x >> n or (x >> v) & 1:
                    raise DomainError(f"row {v} has out-of-range bits or a self-loop")
                for u in members(x):
                    if not (bits[u] >> v) & 1:
                        raise DomainError(f"adjacency not symmetric at ({v}, {u})")
        rows.setflags(write=False)
        self.n = n
        self.rows = rows

    # construction -----------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        rows = np.zeros((n, words_for(n)), dtype=np.uint64)
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"invalid edge ({u}, {v}) for n={n}")
            rows[u, v >> 6] |= np.uint64(1 << (v & 63))
            rows[v, u >> 6] |= np.uint64(1 << (u & 63))
        return cls(n, rows, validate=False)

    @classmethod
    def from_bits(cls, bits: Iterable[int], n: int) -> "Graph":
        g = cls(n, ints_to_rows(bits, n), validate=False)
        return g

    @classmethod
    def from_bool_matrix(cls, adj: np.ndarray) -> "Graph":
        adj = np.asarray(adj, dtype=bool)
        n = adj.shape[0]
        w = words_for(n)
        padded = np.zeros((n, 64 * w), dtype=bool)
        padded[:, :n] = adj
        packed = np.packbits(padded, axis=1, bitorder="little")
        rows = packed.view("<u8").astype(np.uint64).reshape(n, w)
        return cls(n, rows, validate=False)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros((n, words_for(n)), dtype=np.uint64), validate=False)

    # views ------------------------------------------------------------
    @cached_property
    def bits(self) -> tuple[int, ...]:
        """Adjacency rows as Python ints (bit ``u`` of ``bits[v]`` set iff uv is an edge)."""
        return rows_to_ints(self.rows)

    @cached_property
    def edge_count(self) -> int:
        return sum(x.bit_count() for x in self.bits) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.bits[u] >> v) & 1)

    def neighbors(self, v: int) -> list[int]:
        return members(self.bits[v])

    def degree(self, v: int) -> int:
        return self.bits[v].bit_count()

    def edges(self) -> list[Edge]:
        out = []
        for u, x in enumerate(self.bits):
            out.extend((u, v) for v in members(x >> (u + 1) << (u + 1)))
        return out

    @cached_property
    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(self.n.to_bytes(4, "little"))
        h.update(self.rows.astype("<u8").tobytes())
        return h.hexdigest()[:16]

    # relations --------------------------------------------------------
    def is_subgraph_of(self, other: "Graph") -> bool:
        return self.n == other.n and all(a & ~b == 0 for a, b in zip(self.bits, other.bits))

    def without_edges(self, edges: Iterable[Edge]) -> "Graph":
        bits = list(self.bits)
        for u, v in edges:
            bits[u] &= ~(1 << v)
            bits[v] &= ~(1 << u)
        return Graph.from_bits(bits, self.n)

    def with_edges(self, edges: Iterable[Edge]) -> "Graph":
        bits = list(self.bits)
        for u, v in edges:
            if u == v:
                raise DomainError("self-loops are not allowed")
            bits[u] |= 1 << v
            bits[v] |= 1 << u
        return Graph.from_bits(bits, self.n)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and np.array_equal(self.rows, other.rows)

    def __hash__(self) -> int:
        return hash((self.n, self.fingerprint))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.edge_count})"


def complete_graph(n: int) -> Graph:
    if n < 0:
        raise DomainError("n must be non-negative")
    full = (1 << n) - 1
    return Graph.from_bits([full & ~(1 << v) for v in range(n)], n)


def edge_threshold(p: float) -> Optional[int]:
    """floor(p * 2**64) computed exactly; ``None`` means every draw passes (p == 1)."""
    t = int(Fraction(p) * (1 << 64))
    return None if t >= 1 << 64 else t


def generate_gnp(n: int, p: float, seed: Seed | int) -> Graph:
    """Binomial random graph G(n, p).

    Pairs are visited in lexicographic order; pair ``i`` is an edge iff the
    ``i``-th 64-bit draw of ``seed`` is below ``floor(p * 2**64)``.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"edge probability must lie in [0, 1], got {p}")
    if n < 0 or n > MAX_VERTICES:
        raise DomainError(f"vertex count {n} outside [0, {MAX_VERTICES}]")
    seed = as_seed(seed)
    pairs = n * (n - 1) // 2
    t = edge_threshold(p)
    if t is None:
        present = np.ones(pairs, dtype=bool)
    else:
        present = seed.draws(pairs) < np.uint64(t)
    adj = np.zeros((n, n), dtype=bool)
    iu = np.triu_indices(n, 1)
    adj[iu] = present
    adj |= adj.T
    return Graph.from_bool_matrix(adj)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)] if n >= 3 else [])


def common_neighborhood(g: Graph, vertices: Iterable[int]) -> frozenset[int]:
    """Vertices adjacent to every member of ``vertices`` (all of V for the empty set)."""
    return frozenset(members(common_mask(g, vertices)))


def common_mask(g: Graph, vertices: Iterable[int]) -> int:
    m = (1 << g.n) - 1
    for u in vertices:
        m &= g.bits[u]
    return m


def contains_clique(g: Graph, candidates: Iterable[int], k: int) -> Optional[tuple[int, ...]]:
    """Lexicographically least ``k``-clique inside ``candidates``, or ``None``."""
    if k < 0:
        raise DomainError("clique order must be non-negative")
    return kernels.find_clique(g.rows, mask_of(candidates), k)


def count_cliques(g: Graph, s: int) -> int:
    if s < 1:
        raise DomainError("clique order must be at least 1")
    return kernels.count_cliques(g.rows, (1 << g.n) - 1, s)


# edge-list text format ---------------------------------------------------

def format_edge_list(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def _ints(line: str, lineno: int, expected: int) -> list[int]:
    fields = line.split()
    if len(fields) != expected:
        raise EdgeListError(f"expected {expected} integers, found {len(fields)}", lineno, 1)
    out = []
    for tok in fields:
        col = line.index(tok) + 1
        if not tok.isdigit():
            raise EdgeListError(f"not a non-negative decimal integer: {tok!r}", lineno, col)
        out.append(int(tok))
    return out


def parse_edge_list(text: str) -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EdgeListError("missing header line 'n m'", 1)
    n, m = _ints(lines[0], 1, 2)
    if n > MAX_VERTICES:
        raise EdgeListError(f"n={n} exceeds the configured limit {MAX_VERTICES}", 1)
    if len(lines) - 1 != m:
        raise EdgeListError(f"header declares {m} edges but {len(lines) - 1} edge lines follow", 1)
    edges: list[Edge] = []
    prev: Optional[Edge] = None
    for i, line in enumerate(lines[1:], start=2):
        u, v = _ints(line, i, 2)
        if not u < v:
            raise EdgeListError(f"edge ({u}, {v}) must satisfy u < v", i)
        if v >= n:
            raise EdgeListError(f"vertex {v} out of range for n={n}", i, line.rindex(str(v)) + 1)
        if prev is not None and (u, v) <= prev:
            what = "duplicate" if (u, v) == prev else "unsorted"
            raise EdgeListError(f"{what} edge ({u}, {v})", i)
        prev = (u, v)
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def read_edge_list(path) -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_edge_list(g))
