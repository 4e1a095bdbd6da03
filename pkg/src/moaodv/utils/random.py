"""Seeded random source used by the master control flow."""

from __future__ import annotations

import numpy as np


class RandomSource:
    """Thin wrapper around a PCG64 generator seeded through ``SeedSequence``.

    PCG64 streams are identical across platforms for a given numpy version,
    and ``spawn`` gives statistically independent child streams, which is how
    campaign seeds are derived from one base seed.
    """

    def __init__(self, seed: int | np.random.SeedSequence | None = 0):
        if isinstance(seed, np.random.SeedSequence):
            self._seq = seed
        else:
            self._seq = np.random.SeedSequence(None if seed is None else int(seed))
        self.seed = self._seq.entropy
        self._gen = np.random.Generator(np.random.PCG64(self._seq))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def random(self, size=None):
        return self._gen.random(size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size)

    def distinct_pair(self, n: int) -> tuple[int, int]:
        """Two distinct indices drawn uniformly from ``range(n)``."""
        if n < 2:
            raise ValueError("need at least two candidates")
        a = int(self._gen.integers(n))
        b = int(self._gen.integers(n - 1))
        if b >= a:
            b += 1
        return a, b

    def spawn(self, n: int) -> list["RandomSource"]:
        return [RandomSource(child) for child in self._seq.spawn(n)]


def derive_seeds(base_seed: int, n: int) -> list[int]:
    """Per-repetition 63-bit seeds: child ``i`` of ``SeedSequence(base_seed)``."""
    children = np.random.SeedSequence(int(base_seed)).spawn(n)
    return [int(c.generate_state(1, np.uint64)[0] >> np.uint64(1)) for c in children]
