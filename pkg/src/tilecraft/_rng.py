"""Seeded draws built only on the raw PCG64 output stream.

numpy guarantees the raw ``PCG64`` bit stream for a given seed, but not the
algorithms behind ``Generator`` methods. Deriving every draw from raw 64-bit
words keeps samples and synthetic data identical across numpy versions and
platforms.
"""
from __future__ import annotations

import numpy as np


class Stream:
    def __init__(self, seed: int):
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self._bits = np.random.PCG64(seed)

    def raw(self, n: int) -> np.ndarray:
        return self._bits.random_raw(n).astype(np.uint64)

    def uniform(self, n: int) -> np.ndarray:
        """Doubles in [0, 1) from the top 53 bits of each word."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, n: int) -> np.ndarray:
        """Standard normals via Box-Muller (two words per draw)."""
        u1 = 1.0 - self.uniform(n)
        u2 = self.uniform(n)
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)

    def integers(self, n: int, high: int) -> np.ndarray:
        """Values in [0, high) by multiply-shift on 32-bit halves."""
        top = (self.raw(n) >> np.uint64(32)).astype(np.uint64)
        return ((top * np.uint64(high)) >> np.uint64(32)).astype(np.int64)

    def choose(self, n: int, k: int) -> np.ndarray:
        """Sorted positions of a k-subset of range(n), without replacement.

        Every position gets a random 64-bit key; the k smallest keys win,
        ties resolved by position.
        """
        if not 0 <= k <= n:
            raise ValueError("cannot choose more items than available")
        keys = self.raw(n)
        picked = np.lexsort((np.arange(n), keys))[:k]
        return np.sort(picked)
