"""Brute-force reference implementations over adjacency sets.

Deliberately naive: no bitsets, no shared code with the package kernels.
"""
from itertools import combinations, permutations


def adjacency(g):
    adj = {v: set() for v in range(g.n)}
    for u, v in g.edges():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def is_clique(adj, vs):
    return all(b in adj[a] for a, b in combinations(vs, 2))


def count_cliques(g, s):
    adj = adjacency(g)
    return sum(1 for vs in combinations(range(g.n), s) if is_clique(adj, vs))


def mu(g, u, v, s):
    adj = adjacency(g)
    others = [w for w in range(g.n) if w not in (u, v)]
    return sum(
        1 for W in combinations(others, s - 2)
        if all(u in adj[w] and v in adj[w] for w in W) and is_clique(adj, W)
    )


def pair_has_extension(adj, n, u, v, s):
    common = [w for w in range(n) if w != u and w != v and u in adj[w] and v in adj[w]]
    return any(is_clique(adj, W) for W in combinations(common, s - 2))


def bs_violations(g, s):
    adj = adjacency(g)
    return sum(1 for u, v in g.edges() if not pair_has_extension(adj, g.n, u, v, s))


def bstar_violations(g, s):
    adj = adjacency(g)
    return sum(1 for u, v in combinations(range(g.n), 2) if not pair_has_extension(adj, g.n, u, v, s))


def ext_holds(g, s):
    adj = adjacency(g)
    for S in combinations(range(g.n), s):
        common = [w for w in range(g.n) if all(w in adj[x] for x in S)]
        if not any(is_clique(adj, W) for W in combinations(common, s - 2)):
            return False
    return True


def closure_edges(host, h, s):
    """Fixed point of single-edge additions, recomputed from scratch each round."""
    hadj = adjacency(host)
    cur = adjacency(h)
    changed = True
    while changed:
        changed = False
        for u, v in host.edges():
            if v in cur[u]:
                continue
            if pair_has_extension(cur, host.n, u, v, s):
                cur[u].add(v)
                cur[v].add(u)
                changed = True
    assert all(cur[v] <= hadj[v] for v in cur)
    return {(u, v) for u in cur for v in cur[u] if u < v}


def hamiltonian_path_exists(g, vertices):
    """Held-Karp style subset DP over the induced subgraph."""
    vs = sorted(vertices)
    m = len(vs)
    if m == 0:
        return False
    adj = adjacency(g)
    reach = [[False] * m for _ in range(1 << m)]
    for i in range(m):
        reach[1 << i][i] = True
    for mask in range(1 << m):
        for i in range(m):
            if not reach[mask][i]:
                continue
            for j in range(m):
                if not mask >> j & 1 and vs[j] in adj[vs[i]]:
                    reach[mask | 1 << j][j] = True
    return any(reach[(1 << m) - 1])


def path_power_exists(g, vertices, k):
    """Exhaustive over all orderings; tiny sets only."""
    adj = adjacency(g)
    vs = sorted(vertices)
    if not vs:
        return False
    for order in permutations(vs):
        if all(order[j] in adj[order[i]]
               for i in range(len(order)) for j in range(i + 1, min(i + k, len(order) - 1) + 1)):
            return True
    return False
