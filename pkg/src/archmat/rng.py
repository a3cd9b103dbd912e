"""Deterministic 64-bit pseudo-random generator (SplitMix64).

All randomness in the package (dataset shuffles, random split thresholds,
boosting permutations) flows through this generator so that a given integer
seed reproduces bit-identical results on any platform.  SplitMix64 is the
output mixer from Steele, Lea & Flood, "Fast splittable pseudorandom number
generators" (the java.util.SplittableRandom update function): state advances
by the odd constant 0x9E3779B97F4A7C15 and the output is finalized with two
xor-shift multiplies.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    """Deterministic stream of 64-bit integers from one integer seed."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        """Uniform float in [low, high) using the top 53 bits."""
        u = self.next_u64() >> 11
        return low + (high - low) * (u / float(1 << 53))

    def randrange(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("randrange needs a positive bound")
        limit = _MASK - ((_MASK + 1) % n)
        while True:
            u = self.next_u64()
            if u <= limit:
                return u % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, descending index convention."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]


def derive_seed(seed: int, stream: int) -> int:
    """Independent child seed for a named sub-stream of ``seed``."""
    return SplitMix64((seed & _MASK) ^ ((stream & _MASK) * 0xD1342543DE82EF95 & _MASK)).next_u64()
