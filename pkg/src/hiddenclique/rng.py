"""Deterministic randomness built on SplitMix64.

SplitMix64 is used for everything random in this package because it is a
named, portable generator with a published reference sequence: seeded with 0,
the first three outputs are 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4,
0x06C45D188009454F. Output ``i`` (0-based) of a stream seeded with ``s`` is
``mix64((s + (i + 1) * GOLDEN) mod 2**64)``, which makes any block of the
stream computable out of order. Graph generation exploits that: the value
consumed for a vertex pair depends only on the seed and the pair's position
in canonical order, so results are identical no matter how work is split.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_U64_GOLDEN = np.uint64(GOLDEN)
_U64_MIX1 = np.uint64(_MIX1)
_U64_MIX2 = np.uint64(_MIX2)

#: scale turning the top 53 bits of a u64 into a float in [0, 1)
_INV53 = 2.0 ** -53


def mix64(x: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit integer."""
    z = x & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return (z ^ (z >> 31)) & MASK64


def derive_seed(master: int, *indices: int) -> int:
    """Mix a master seed with index coordinates into an independent 64-bit seed.

    Pure function: ``derive_seed(m, a, b)`` chains the finalizer as
    ``mix64(mix64(m + (a+1)*GOLDEN) + (b+1)*GOLDEN)``, so any (cell, trial)
    coordinate can be replayed in isolation.
    """
    s = master & MASK64
    for ix in indices:
        s = mix64((s + ((ix + 1) * GOLDEN)) & MASK64)
    return s


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _U64_MIX1
    z = (z ^ (z >> np.uint64(27))) * _U64_MIX2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """A sequential SplitMix64 stream. Seed 0 is legal."""

    __slots__ = ("seed", "_count")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._count = 0

    @property
    def position(self) -> int:
        """Number of outputs consumed so far."""
        return self._count

    def next_u64(self) -> int:
        self._count += 1
        return mix64((self.seed + self._count * GOLDEN) & MASK64)

    def next_float(self) -> float:
        """Next uniform real in [0, 1): the top 53 bits of the next output."""
        return (self.next_u64() >> 11) * _INV53

    def next_below(self, bound: int) -> int:
        """Next uniform integer in [0, bound)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return int(self.next_float() * bound)

    def floats(self, count: int) -> np.ndarray:
        """Next ``count`` uniform reals as a vector, equal to ``count`` calls of next_float."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        if count == 0:
            return np.empty(0, dtype=np.float64)
        with np.errstate(over="ignore"):
            pos = np.arange(self._count + 1, self._count + count + 1, dtype=np.uint64)
            z = _mix64_np(np.uint64(self.seed) + pos * _U64_GOLDEN)
        self._count += count
        return (z >> np.uint64(11)).astype(np.float64) * _INV53
