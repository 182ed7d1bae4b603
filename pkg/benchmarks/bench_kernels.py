"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat R] [--quick]

Each workload runs on every available backend; the table reports the best of
R wall-clock timings and the speedup of the compiled backend.
"""
from __future__ import annotations

import argparse
import time

from wsatlab import kernels
from wsatlab.bootstrap import ks_closure
from wsatlab.constructions import power_ham_path
from wsatlab.graph import Graph, complete_graph, count_cliques, generate_gnp
from wsatlab.properties import check_Bs, check_EXT
from wsatlab.seeding import Seed
from wsatlab.wsat import decide_As


def workloads(quick: bool):
    scale = 0.4 if quick else 1.0
    n = int(300 * scale)
    g = generate_gnp(n, 0.5, Seed(1))
    sparse = Graph.from_edges(n, g.edges()[::9])
    half = complete_graph(n // 2)
    star_pair = Graph.from_edges(half.n, [(u, v) for u, v in half.edges() if u < 2])
    g60 = generate_gnp(60, 0.6, Seed(2))
    g400 = generate_gnp(int(400 * scale), 0.3, Seed(3))
    return [
        (f"count K_5 in G({n}, 0.5)", lambda: count_cliques(g, 5)),
        (f"closure s=3 in G({n}, 0.5)", lambda: ks_closure(g, sparse, 3)),
        (f"closure s=4 in K_{half.n}", lambda: ks_closure(half, star_pair, 4)),
        (f"B_3 count, G({g400.n}, 0.3)", lambda: check_Bs(g400, 3)),
        ("EXT s=3 full scan, G(60, 0.6)", lambda: check_EXT(g60, 3)),
        ("path power k=3, G(60, 0.6)", lambda: power_ham_path(g60, range(60), 3)),
        ("decide A_3 on 5 graphs G(60, 0.6)",
         lambda: [decide_As(generate_gnp(60, 0.6, Seed(4).child("as", i)), 3) for i in range(5)]),
    ]


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)
    names = kernels.available()
    rows = []
    for label, fn in workloads(args.quick):
        timings = {}
        for name in names:
            with kernels.using(name):
                timings[name] = best_of(fn, args.repeat)
        rows.append((label, timings))

    width = max(len(label) for label, _ in rows)
    header = f"{'workload':<{width}}  " + "  ".join(f"{name:>10}" for name in names)
    if "cython" in names:
        header += f"  {'speedup':>8}"
    print(header)
    for label, timings in rows:
        line = f"{label:<{width}}  " + "  ".join(f"{timings[name] * 1e3:>8.1f}ms" for name in names)
        if "cython" in names:
            line += f"  {timings['python'] / timings['cython']:>7.1f}x"
        print(line)
    if "cython" not in names:
        print("compiled backend not built; only the pure-Python timings are shown")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
