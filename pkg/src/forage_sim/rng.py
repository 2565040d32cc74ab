"""Deterministic random streams.

Every run owns one :class:`RngStream`. Seeds for the streams are derived from
``(master_seed, point_index, run_index)`` with a splitmix64-style mixer, so a
run's stream depends only on its own coordinates and never on how many other
runs exist or on which worker executes it.
"""

from __future__ import annotations

import math
import random

MASK64 = (1 << 64) - 1

# Poisson draws above this mean are split into chunks (Poisson additivity)
# so exp(-mean) never underflows.
_POISSON_CHUNK = 10.0


def splitmix64(x: int) -> int:
    """One round of the splitmix64 finalizer on a 64-bit word."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, *indices: int) -> int:
    """Mix a master seed with any number of indices into a 64-bit seed."""
    h = splitmix64(master_seed & MASK64)
    for i in indices:
        h = splitmix64(h ^ (i & MASK64))
    return h


class RngStream:
    """A seeded stream of uniform, angle and Poisson draws.

    Backed by the stdlib Mersenne Twister, whose ``random()`` output for an
    integer seed is fixed across platforms and Python versions. All derived
    draws are computed here from ``random()`` with fixed formulas, so nothing
    depends on library-version sampling algorithms.
    """

    __slots__ = ("seed", "_random")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._random = random.Random(self.seed).random

    @classmethod
    def for_run(cls, master_seed: int, run_index: int) -> "RngStream":
        return cls(derive_seed(master_seed, run_index))

    def random(self) -> float:
        return self._random()

    def uniform(self, a: float, b: float) -> float:
        return a + (b - a) * self._random()

    def poisson(self, mean: float) -> int:
        """Knuth's product-of-uniforms sampler, chunked for large means."""
        if mean <= 0.0:
            return 0
        total = 0
        while mean > _POISSON_CHUNK:
            total += self._knuth(_POISSON_CHUNK)
            mean -= _POISSON_CHUNK
        return total + self._knuth(mean)

    def _knuth(self, mean: float) -> int:
        limit = math.exp(-mean)
        k = 0
        p = self._random()
        while p > limit:
            k += 1
            p *= self._random()
        return k
