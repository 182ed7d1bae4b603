"""Pure-Python hot kernels over Python-int bitsets.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and the same visiting order, so traces and witnesses agree bit for bit.
"""
from __future__ import annotations

from collections import deque

import numpy as np

FOUND, ABSENT, EXHAUSTED = 0, 1, 2


def _ints(rows: np.ndarray) -> list[int]:
    return [int.from_bytes(r.astype("<u8").tobytes(), "little") for r in rows]


def _row_int(row: np.ndarray) -> int:
    return int.from_bytes(np.asarray(row, dtype="<u8").tobytes(), "little")


def _members(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _find(bits, cand: int, k: int):
    if k == 0:
        return ()
    while cand:
        if cand.bit_count() < k:
            return None
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        if k == 1:
            return (v,)
        sub = _find(bits, cand & bits[v], k - 1)
        if sub is not None:
            return (v,) + sub
    return None


def _count(bits, cand: int, k: int) -> int:
    if k == 0:
        return 1
    if k == 1:
        return cand.bit_count()
    total = 0
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        nxt = cand & bits[v]
        if nxt.bit_count() >= k - 1:
            total += _count(bits, nxt, k - 1)
    return total


def find_clique(rows, cand, k):
    return _find(_ints(rows), _row_int(cand), k)


def count_cliques(rows, cand, k):
    return _count(_ints(rows), _row_int(cand), k)


def closure(host_rows, start_rows, s):
    """K_s-bootstrap closure of ``start`` inside ``host``.

    Returns ``(closure_rows, steps)`` where each step is ``(u, v, witness)``.
    """
    host = _ints(host_rows)
    cur = _ints(start_rows)
    n = len(host)
    k = s - 2
    queue: deque = deque()
    inq = [0] * n

    def push(a, b):
        if a > b:
            a, b = b, a
        if not (inq[a] >> b) & 1:
            inq[a] |= 1 << b
            queue.append((a, b))

    for u in range(n):
        for v in _members((host[u] & ~cur[u]) >> (u + 1) << (u + 1)):
            push(u, v)

    steps = []
    while queue:
        a, b = queue.popleft()
        inq[a] &= ~(1 << b)
        if (cur[a] >> b) & 1:
            continue
        w = _find(cur, cur[a] & cur[b], k)
        if w is None:
            continue
        cur[a] |= 1 << b
        cur[b] |= 1 << a
        steps.append((a, b, w))
        # pairs that gained b (resp. a) as a fresh common neighbour
        for x, y in ((a, b), (b, a)):
            for z in _members(host[x] & ~cur[x] & cur[y]):
                push(x, z)
        if k >= 2:
            # pairs whose common neighbourhood gained the edge ab itself
            both = cur[a] & cur[b]
            for x in _members(both):
                for y in _members((host[x] & ~cur[x] & both) >> (x + 1) << (x + 1)):
                    push(x, y)

    out = np.zeros_like(np.asarray(host_rows, dtype=np.uint64))
    w_count = out.shape[1] if out.ndim == 2 else 1
    for v, x in enumerate(cur):
        if x:
            out[v] = np.frombuffer(x.to_bytes(8 * w_count, "little"), dtype="<u8")
    return out, steps


def power_path(rows, cand, k, budget):
    """Order ``cand`` so that vertices at order-distance <= k are adjacent.

    Returns ``(status, order, extensions)``.
    """
    bits = _ints(rows)
    S = _row_int(cand)
    f = S.bit_count()
    if f == 0:
        return ABSENT, [], 0
    if f == 1:
        return FOUND, list(_members(S)), 0
    need = min(k, f - 1)
    degs = [(bits[v] & S).bit_count() for v in _members(S)]
    if min(degs) < need or sum(degs) // 2 < sum(f - d for d in range(1, need + 1)):
        return ABSENT, [], 0

    path: list[int] = []
    ext = 0

    class _Out(Exception):
        pass

    def rec(R: int) -> bool:
        nonlocal ext
        if not R:
            return True
        C = R
        for u in path[len(path) - min(k, len(path)):]:
            C &= bits[u]
        for c in sorted(_members(C), key=lambda c: ((bits[c] & R).bit_count(), c)):
            ext += 1
            if ext > budget:
                raise _Out
            path.append(c)
            if rec(R & ~(1 << c)):
                return True
            path.pop()
        return False

    try:
        found = rec(S)
    except _Out:
        return EXHAUSTED, [], ext
    return (FOUND, path, ext) if found else (ABSENT, [], ext)


def set_scan(rows, size, k, clique_sets, stop_first):
    """Count ``size``-subsets whose common neighbourhood holds no ``k``-clique.

    With ``clique_sets`` only subsets that are themselves cliques are visited.
    Returns ``(violations, first_violating_subset_or_None)``.
    """
    bits = _ints(rows)
    n = len(bits)
    full = (1 << n) - 1
    chosen: list[int] = []
    state = {"viol": 0, "first": None}

    def rec(start: int, common: int) -> bool:
        level = len(chosen)
        if level == size:
            if _find(bits, common, k) is None:
                state["viol"] += 1
                if state["first"] is None:
                    state["first"] = tuple(chosen)
                return stop_first
            return False
        for v in range(start, n - (size - level) + 1):
            if clique_sets and level and not (common >> v) & 1:
                continue
            chosen.append(v)
            stop = rec(v + 1, common & bits[v])
            chosen.pop()
            if stop:
                return True
        return False

    rec(0, full)
    return state["viol"], state["first"]
