# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same contracts and visiting order as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memcpy

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

FOUND, ABSENT, EXHAUSTED = 0, 1, 2


cdef inline int _pop(const uint64_t* a, int W) noexcept nogil:
    cdef int i, c = 0
    for i in range(W):
        c += __builtin_popcountll(a[i])
    return c


cdef inline int _lowest(const uint64_t* a, int W) noexcept nogil:
    cdef int i
    for i in range(W):
        if a[i]:
            return i * 64 + __builtin_ctzll(a[i])
    return -1


cdef inline bint _test(const uint64_t* a, int v) noexcept nogil:
    return (a[v >> 6] >> (v & 63)) & 1


cdef int _find(const uint64_t* rows, int W, uint64_t* P, int k, int* out) noexcept nogil:
    # P is consumed; P + W is scratch for the next level
    cdef uint64_t* nxt = P + W
    cdef int v, i
    if k == 0:
        return 1
    while True:
        if _pop(P, W) < k:
            return 0
        v = _lowest(P, W)
        P[v >> 6] &= ~((<uint64_t>1) << (v & 63))
        if k == 1:
            out[0] = v
            return 1
        for i in range(W):
            nxt[i] = P[i] & rows[v * W + i]
        if _find(rows, W, nxt, k - 1, out + 1):
            out[0] = v
            return 1


cdef int64_t _count(const uint64_t* rows, int W, uint64_t* P, int k) noexcept nogil:
    cdef uint64_t* nxt = P + W
    cdef int v, i
    cdef int64_t total = 0
    if k == 0:
        return 1
    if k == 1:
        return _pop(P, W)
    while True:
        v = _lowest(P, W)
        if v < 0:
            return total
        P[v >> 6] &= ~((<uint64_t>1) << (v & 63))
        for i in range(W):
            nxt[i] = P[i] & rows[v * W + i]
        if _pop(nxt, W) >= k - 1:
            total += _count(rows, W, nxt, k - 1)


def find_clique(const uint64_t[:, ::1] rows, const uint64_t[::1] cand, int k):
    cdef int W = cand.shape[0]
    cdef uint64_t* buf = <uint64_t*>calloc((k + 2) * W, sizeof(uint64_t))
    cdef int* out = <int*>malloc((k + 1) * sizeof(int))
    cdef int ok, i
    try:
        memcpy(buf, &cand[0], W * sizeof(uint64_t))
        ok = _find(&rows[0, 0], W, buf, k, out)
        if not ok:
            return None
        return tuple(out[i] for i in range(k))
    finally:
        free(buf)
        free(out)


def count_cliques(const uint64_t[:, ::1] rows, const uint64_t[::1] cand, int k):
    cdef int W = cand.shape[0]
    cdef uint64_t* buf = <uint64_t*>calloc((k + 2) * W, sizeof(uint64_t))
    try:
        memcpy(buf, &cand[0], W * sizeof(uint64_t))
        return _count(&rows[0, 0], W, buf, k)
    finally:
        free(buf)


cdef struct Queue:
    int64_t* data
    int64_t cap
    int64_t head
    int64_t size


cdef inline void _push(Queue* q, uint64_t* inq, int W, int n, int a, int b) noexcept nogil:
    cdef int t
    if a > b:
        t = a
        a = b
        b = t
    if (inq[a * W + (b >> 6)] >> (b & 63)) & 1:
        return
    inq[a * W + (b >> 6)] |= (<uint64_t>1) << (b & 63)
    q.data[(q.head + q.size) % q.cap] = <int64_t>a * n + b
    q.size += 1


def closure(const uint64_t[:, ::1] host_rows, const uint64_t[:, ::1] start_rows, int s):
    cdef int n = host_rows.shape[0]
    cdef int W = host_rows.shape[1]
    cdef int k = s - 2
    cur_arr = np.array(start_rows, dtype=np.uint64, copy=True)
    cdef uint64_t[:, ::1] curv = cur_arr
    if n == 0:
        return cur_arr, []
    cdef const uint64_t* host = &host_rows[0, 0]
    cdef uint64_t* cur = &curv[0, 0]
    cdef int u, v, i, a, b, x, y, z, j, xi
    cdef int64_t pair
    cdef uint64_t m, ym
    cdef int64_t missing = 0
    for u in range(n):
        for i in range(W):
            missing += __builtin_popcountll(host[u * W + i] & ~cur[u * W + i])
    missing //= 2
    cdef Queue q
    q.cap = missing + 1
    q.head = 0
    q.size = 0
    q.data = <int64_t*>malloc(q.cap * sizeof(int64_t))
    cdef uint64_t* inq = <uint64_t*>calloc(n * W, sizeof(uint64_t))
    cdef uint64_t* buf = <uint64_t*>calloc((k + 2) * W, sizeof(uint64_t))
    cdef uint64_t* both = <uint64_t*>calloc(W, sizeof(uint64_t))
    cdef int* wit = <int*>malloc((k + 1) * sizeof(int))
    cdef int xs[2]
    cdef int ys[2]
    steps = []
    try:
        for u in range(n):
            for i in range(W):
                m = host[u * W + i] & ~cur[u * W + i]
                while m:
                    v = i * 64 + __builtin_ctzll(m)
                    m &= m - 1
                    if v > u:
                        _push(&q, inq, W, n, u, v)
        while q.size:
            pair = q.data[q.head]
            q.head = (q.head + 1) % q.cap
            q.size -= 1
            a = <int>(pair // n)
            b = <int>(pair % n)
            inq[a * W + (b >> 6)] &= ~((<uint64_t>1) << (b & 63))
            if _test(cur + a * W, b):
                continue
            for i in range(W):
                buf[i] = cur[a * W + i] & cur[b * W + i]
            if not _find(cur, W, buf, k, wit):
                continue
            cur[a * W + (b >> 6)] |= (<uint64_t>1) << (b & 63)
            cur[b * W + (a >> 6)] |= (<uint64_t>1) << (a & 63)
            steps.append((a, b, tuple(wit[j] for j in range(k))))
            xs[0] = a
            ys[0] = b
            xs[1] = b
            ys[1] = a
            for j in range(2):
                x = xs[j]
                y = ys[j]
                for i in range(W):
                    m = host[x * W + i] & ~cur[x * W + i] & cur[y * W + i]
                    while m:
                        z = i * 64 + __builtin_ctzll(m)
                        m &= m - 1
                        _push(&q, inq, W, n, x, z)
            if k >= 2:
                for i in range(W):
                    both[i] = cur[a * W + i] & cur[b * W + i]
                for xi in range(W):
                    m = both[xi]
                    while m:
                        x = xi * 64 + __builtin_ctzll(m)
                        m &= m - 1
                        for i in range(x >> 6, W):
                            ym = host[x * W + i] & ~cur[x * W + i] & both[i]
                            if i == (x >> 6):
                                ym &= ~((((<uint64_t>1) << (x & 63)) << 1) - 1)
                            while ym:
                                y = i * 64 + __builtin_ctzll(ym)
                                ym &= ym - 1
                                _push(&q, inq, W, n, x, y)
    finally:
        free(q.data)
        free(inq)
        free(buf)
        free(both)
        free(wit)
    return cur_arr, steps


def power_path(const uint64_t[:, ::1] rows, const uint64_t[::1] cand, int k, long long budget):
    cdef int W = cand.shape[0]
    cdef const uint64_t* R0 = &cand[0]
    cdef const uint64_t* G = &rows[0, 0]
    cdef int f = _pop(R0, W)
    cdef int i, j, v, c, d, need, depth, lo, key, t
    cdef long long ext = 0
    cdef int64_t edges2 = 0, required = 0
    if f == 0:
        return ABSENT, [], 0
    if f == 1:
        return FOUND, [_lowest(R0, W)], 0
    need = k if k < f - 1 else f - 1
    cdef uint64_t* tmp = <uint64_t*>malloc(W * sizeof(uint64_t))
    cdef uint64_t* Rst = <uint64_t*>malloc((f + 1) * W * sizeof(uint64_t))
    cdef int* cands = <int*>malloc(f * f * sizeof(int))
    cdef int* keys = <int*>malloc(f * sizeof(int))
    cdef int* cnt = <int*>malloc(f * sizeof(int))
    cdef int* pos = <int*>malloc(f * sizeof(int))
    cdef int* path = <int*>malloc(f * sizeof(int))
    cdef int mindeg = f
    cdef uint64_t m
    try:
        for i in range(W):
            m = R0[i]
            while m:
                v = i * 64 + __builtin_ctzll(m)
                m &= m - 1
                d = 0
                for j in range(W):
                    d += __builtin_popcountll(G[v * W + j] & R0[j])
                edges2 += d
                if d < mindeg:
                    mindeg = d
        for d in range(1, need + 1):
            required += f - d
        if mindeg < need or edges2 // 2 < required:
            return ABSENT, [], 0

        memcpy(Rst, R0, W * sizeof(uint64_t))
        depth = 0
        # candidate list for depth 0
        _fill(G, W, Rst, path, 0, k, cands, keys, cnt, tmp)
        pos[0] = 0
        while True:
            if pos[depth] < cnt[depth]:
                c = cands[depth * f + pos[depth]]
                pos[depth] += 1
                ext += 1
                if ext > budget:
                    return EXHAUSTED, [], ext
                path[depth] = c
                for i in range(W):
                    Rst[(depth + 1) * W + i] = Rst[depth * W + i]
                Rst[(depth + 1) * W + (c >> 6)] &= ~((<uint64_t>1) << (c & 63))
                if depth + 1 == f:
                    return FOUND, [path[i] for i in range(f)], ext
                depth += 1
                _fill(G, W, Rst + depth * W, path, depth, k, cands + depth * f, keys, cnt + depth, tmp)
                pos[depth] = 0
            else:
                if depth == 0:
                    return ABSENT, [], ext
                depth -= 1
    finally:
        free(tmp)
        free(Rst)
        free(cands)
        free(keys)
        free(cnt)
        free(pos)
        free(path)


cdef void _fill(const uint64_t* G, int W, const uint64_t* R, const int* path, int depth, int k,
                int* out, int* keys, int* cnt, uint64_t* tmp) noexcept nogil:
    # candidates = R adjacent to the last min(k, depth) placed vertices,
    # sorted by (neighbours in R, index); insertion sort keeps index order on ties
    cdef int i, j, lo, c, key, n = 0
    cdef uint64_t m
    lo = depth - k if depth > k else 0
    for i in range(W):
        tmp[i] = R[i]
    for j in range(lo, depth):
        for i in range(W):
            tmp[i] &= G[path[j] * W + i]
    for i in range(W):
        m = tmp[i]
        while m:
            c = i * 64 + __builtin_ctzll(m)
            m &= m - 1
            key = 0
            for j in range(W):
                key += __builtin_popcountll(G[c * W + j] & R[j])
            j = n
            while j > 0 and keys[j - 1] > key:
                keys[j] = keys[j - 1]
                out[j] = out[j - 1]
                j -= 1
            keys[j] = key
            out[j] = c
            n += 1
    cnt[0] = n


cdef struct ScanCtx:
    const uint64_t* rows
    int W
    int n
    int size
    int k
    bint clique_sets
    bint stop_first
    int* chosen
    uint64_t* commons
    uint64_t* buf
    int* wit
    int64_t viol
    bint have_first


cdef int _scan(ScanCtx* ctx, int level, int start, int* first) noexcept nogil:
    cdef int W = ctx.W
    cdef int v, i
    cdef uint64_t* common = ctx.commons + level * W
    cdef uint64_t* nxt = ctx.commons + (level + 1) * W
    if level == ctx.size:
        for i in range(W):
            ctx.buf[i] = common[i]
        if not _find(ctx.rows, W, ctx.buf, ctx.k, ctx.wit):
            ctx.viol += 1
            if not ctx.have_first:
                ctx.have_first = True
                for i in range(ctx.size):
                    first[i] = ctx.chosen[i]
            return 1 if ctx.stop_first else 0
        return 0
    for v in range(start, ctx.n - (ctx.size - level) + 1):
        if ctx.clique_sets and level > 0 and not _test(common, v):
            continue
        ctx.chosen[level] = v
        for i in range(W):
            nxt[i] = common[i] & ctx.rows[v * W + i]
        if _scan(ctx, level + 1, v + 1, first):
            return 1
    return 0


def set_scan(const uint64_t[:, ::1] rows, int size, int k, bint clique_sets, bint stop_first):
    cdef int n = rows.shape[0]
    cdef int W = rows.shape[1]
    cdef ScanCtx ctx
    cdef int i
    cdef int* first = <int*>malloc((size + 1) * sizeof(int))
    if n == 0:
        free(first)
        # only the empty subset exists, and only when size == 0
        return (0, None)
    ctx.rows = &rows[0, 0]
    ctx.W = W
    ctx.n = n
    ctx.size = size
    ctx.k = k
    ctx.clique_sets = clique_sets
    ctx.stop_first = stop_first
    ctx.chosen = <int*>malloc((size + 1) * sizeof(int))
    ctx.commons = <uint64_t*>malloc((size + 2) * W * sizeof(uint64_t))
    ctx.buf = <uint64_t*>malloc((k + 2) * W * sizeof(uint64_t))
    ctx.wit = <int*>malloc((k + 1) * sizeof(int))
    ctx.viol = 0
    ctx.have_first = False
    try:
        for i in range(W):
            ctx.commons[i] = 0
        for i in range(n):
            ctx.commons[i >> 6] |= (<uint64_t>1) << (i & 63)
        with nogil:
            _scan(&ctx, 0, 0, first)
        if ctx.have_first:
            return ctx.viol, tuple(first[i] for i in range(size))
        return ctx.viol, None
    finally:
        free(first)
        free(ctx.chosen)
        free(ctx.commons)
        free(ctx.buf)
        free(ctx.wit)
