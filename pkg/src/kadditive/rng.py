"""SplitMix64 generator with a fixed stream-split rule.

The algorithm is fully specified here so fixtures can be reproduced bit for
bit by any implementation:

* state advances by ``GOLDEN = 0x9E3779B97F4A7C15`` (mod 2**64) per draw and
  the output is ``mix64(state)``;
* ``uniform()`` is ``(next_u64() >> 11) * 2**-53``;
* ``below(b)`` rejects draws ``>= 2**64 - (2**64 % b)`` then returns ``u % b``;
* ``substream(i)`` seeds a child with ``mix64(seed ^ mix64(i + STREAM))``.
"""

from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
STREAM = 0x632BE59BD9B4E019
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * _M1) & MASK
    z = ((z ^ (z >> 27)) * _M2) & MASK
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


class Rng:
    """Deterministic 64-bit generator; pure integer state."""

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK
        self._state = self.seed

    def substream(self, index: int) -> "Rng":
        """Independent child stream; does not advance this generator."""
        return Rng(mix64(self.seed ^ mix64(int(index) + STREAM)))

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK
        return mix64(self._state)

    def u64s(self, size: int) -> np.ndarray:
        steps = np.arange(1, size + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            states = np.uint64(self._state) + steps * np.uint64(GOLDEN)
            out = _mix64_array(states)
        self._state = (self._state + size * GOLDEN) & MASK
        return out

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * 2.0**-53
        return low + (high - low) * u

    def uniforms(self, size: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        u = (self.u64s(size) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return low + (high - low) * u

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound

    def integer(self, low: int, high: int) -> int:
        """Uniform integer in ``[low, high]`` inclusive."""
        return low + self.below(high - low + 1)

    def permutation(self, n: int) -> np.ndarray:
        perm = np.arange(n)
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm

    def sample(self, n: int, size: int) -> list[int]:
        """``size`` distinct integers from ``range(n)``, in draw order."""
        return [int(x) for x in self.permutation(n)[:size]]

    def bernoulli(self, p: float) -> bool:
        return self.uniform() < p
