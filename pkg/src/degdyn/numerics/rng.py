"""Counter-based random streams keyed by ``(seed, index)``."""

from __future__ import annotations

import numpy as np


class RandomStream:
    """Philox stream whose key is ``(seed, index)``; draws are reproducible."""

    def __init__(self, seed: int, index: int = 0):
        if not 0 <= seed < 2**64 or not 0 <= index < 2**64:
            raise ValueError("seed and index must fit in 64 bits")
        self.seed = int(seed)
        self.index = int(index)
        key = np.array([self.seed, self.index], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def uniform(self, size=None, low: float = 0.0, high: float = 1.0):
        return self._gen.uniform(low, high, size)

    def unit_disk(self, size=None):
        """Uniform points in the closed unit disk, as complex numbers."""
        r = np.sqrt(self._gen.uniform(0.0, 1.0, size))
        theta = self._gen.uniform(0.0, 2 * np.pi, size)
        return r * np.exp(1j * theta)

    def unit_circle(self, size=None):
        return np.exp(1j * self._gen.uniform(0.0, 2 * np.pi, size))

    def choice(self, n: int, size=None):
        return self._gen.integers(0, n, size)

    def normal(self, size=None):
        return self._gen.standard_normal(size)

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, index={self.index})"


def stream(seed: int, index: int = 0) -> RandomStream:
    return RandomStream(seed, index)


def fresh_seed() -> int:
    """A 64-bit seed from OS entropy, for runs that did not supply one."""
    return int(np.random.SeedSequence().entropy % 2**64)
