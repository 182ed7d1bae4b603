"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when importable; otherwise the
pure-Python ``_pykernels`` module. Setting ``WSATLAB_PURE=1`` forces the
fallback. Candidate sets cross this boundary as Python-int bitmasks.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

import numpy as np

from . import _pykernels

FOUND, ABSENT, EXHAUSTED = _pykernels.FOUND, _pykernels.ABSENT, _pykernels.EXHAUSTED

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_backends = {"python": _pykernels}
if _ckernels is not None:
    _backends["cython"] = _ckernels

_impl = _pykernels if (_ckernels is None or os.environ.get("WSATLAB_PURE")) else _ckernels


def available() -> list[str]:
    return sorted(_backends)


def backend() -> str:
    return "cython" if _impl is _ckernels else "python"


def set_backend(name: str) -> None:
    global _impl
    try:
        _impl = _backends[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; have {available()}") from None


@contextmanager
def using(name: str):
    prev = backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def _row(mask: int, words: int) -> np.ndarray:
    return np.frombuffer(mask.to_bytes(8 * words, "little"), dtype="<u8").astype(np.uint64)


def _rows(rows: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(rows, dtype=np.uint64)


def find_clique(rows: np.ndarray, cand: int, k: int):
    return _impl.find_clique(_rows(rows), _row(cand, rows.shape[1]), k)


def count_cliques(rows: np.ndarray, cand: int, k: int) -> int:
    return int(_impl.count_cliques(_rows(rows), _row(cand, rows.shape[1]), k))


def closure(host_rows: np.ndarray, start_rows: np.ndarray, s: int):
    return _impl.closure(_rows(host_rows), _rows(start_rows), s)


def power_path(rows: np.ndarray, cand: int, k: int, budget: int):
    return _impl.power_path(_rows(rows), _row(cand, rows.shape[1]), k, budget)


def set_scan(rows: np.ndarray, size: int, k: int, clique_sets: bool = False, stop_first: bool = False):
    viol, first = _impl.set_scan(_rows(rows), size, k, clique_sets, stop_first)
    return int(viol), first
