"""The compiled and pure-Python kernels must agree bit for bit."""
import os
import random
import subprocess
import sys

import numpy as np
import pytest

from wsatlab import kernels
from wsatlab.graph import Graph, complete_graph, generate_gnp
from wsatlab.seeding import Seed

needs_both = pytest.mark.skipif(len(kernels.available()) < 2, reason="compiled extension not built")


def _both(fn, *args):
    out = {}
    for name in kernels.available():
        with kernels.using(name):
            out[name] = fn(*args)
    return out["cython"], out["python"]


def _normalize(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (tuple, list)):
        return [_normalize(y) for y in x]
    return x


def _instances(count, max_n=70):
    rnd = random.Random(77)
    for i in range(count):
        n = rnd.randint(2, max_n)
        yield rnd, generate_gnp(n, rnd.uniform(0.2, 0.9), Seed(5).child("kern", i))


@needs_both
def test_find_and_count_agree():
    for rnd, g in _instances(80):
        cand = rnd.getrandbits(g.n)
        for k in range(0, 5):
            a, b = _both(kernels.find_clique, g.rows, cand, k)
            assert _normalize(a) == _normalize(b)
            assert _both(kernels.count_cliques, g.rows, cand, k)[0] == kernels.count_cliques(g.rows, cand, k)


@needs_both
def test_closure_agrees():
    for rnd, g in _instances(80, max_n=40):
        h = Graph.from_edges(g.n, [e for e in g.edges() if rnd.random() < 0.4])
        for s in (3, 4, 5):
            a, b = _both(kernels.closure, g.rows, h.rows, s)
            assert _normalize(a) == _normalize(b)


@needs_both
def test_power_path_agrees():
    for rnd, g in _instances(80, max_n=30):
        cand = rnd.getrandbits(g.n)
        for k in (1, 2, 3):
            a, b = _both(kernels.power_path, g.rows, cand, k, 10_000)
            assert _normalize(a) == _normalize(b)


@needs_both
def test_set_scan_agrees():
    for rnd, g in _instances(40, max_n=16):
        for size, k in ((2, 1), (2, 2), (3, 1), (4, 2)):
            for flags in ((False, False), (True, False), (False, True), (True, True)):
                a, b = _both(kernels.set_scan, g.rows, size, k, *flags)
                assert _normalize(a) == _normalize(b)


@needs_both
def test_wide_rows_beyond_one_word():
    g = complete_graph(130)
    a, b = _both(kernels.count_cliques, g.rows, (1 << 130) - 1, 3)
    assert a == b == 130 * 129 * 128 // 6


def test_backend_switching():
    before = kernels.backend()
    with kernels.using("python"):
        assert kernels.backend() == "python"
    assert kernels.backend() == before
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_pure_fallback_selected_by_environment():
    env = dict(os.environ, WSATLAB_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from wsatlab import kernels; print(kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True).stdout
    assert out.strip() == "python"
