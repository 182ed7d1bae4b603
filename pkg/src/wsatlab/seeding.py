"""Counter-based seed derivation and the SplitMix64 stream.

Mixing function (published, fixed):

    mix64(z):
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)                      # all arithmetic mod 2**64

A seed is a master value plus a derivation path of ``(label, index)`` pairs.
Each path step folds into the running value as::

    h = mix64(h ^ mix64(fnv1a64(label) + index * GOLDEN))

The draw stream of a seed with value ``h`` is SplitMix64 started at ``h``:
draw ``i`` (0-based) is ``mix64(h + (i + 1) * GOLDEN)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def fnv1a64(label: str) -> int:
    h = 0xCBF29CE484222325
    for byte in label.encode("utf-8"):
        h ^= byte
        h = (h * 0x100000001B3) & MASK64
    return h


@dataclass(frozen=True)
class Seed:
    """Master seed plus derivation path; identical seeds give identical streams."""

    master: int
    path: tuple[tuple[str, int], ...] = field(default=())

    def __post_init__(self) -> None:
        if not 0 <= self.master <= MASK64:
            raise ValueError(f"master seed must be a 64-bit unsigned integer, got {self.master}")

    def child(self, label: str, index: int = 0) -> "Seed":
        return Seed(self.master, self.path + ((label, int(index)),))

    @property
    def value(self) -> int:
        h = self.master
        for label, index in self.path:
            h = mix64(h ^ mix64(fnv1a64(label) + index * GOLDEN))
        return h

    def draws(self, count: int) -> np.ndarray:
        """First ``count`` 64-bit draws of this seed's stream."""
        return splitmix_draws(self.value, count)


def splitmix_draws(state: int, count: int) -> np.ndarray:
    steps = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(state & MASK64) + steps * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def as_seed(seed: "Seed | int") -> Seed:
    return seed if isinstance(seed, Seed) else Seed(int(seed))
