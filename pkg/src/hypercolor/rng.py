"""SplitMix64 in counter mode.

Output ``i`` of a stream keyed by ``key`` is ``mix(key + (i + 1) * GOLDEN)``
where ``mix`` is the SplitMix64 finalizer. The algorithm is part of the
record format: a trial seed plus this generator reproduces every random
choice a strategy makes, in Python and in the compiled batch kernel alike.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(master: int, trial: int, q: int) -> int:
    """Stable 64-bit seed for one trial of a sweep."""
    h = mix64(master & MASK64)
    h = mix64(h ^ (trial & MASK64))
    return mix64(h ^ (q & MASK64))


class CounterRNG:
    """Deterministic stream; ``counter`` is the number of draws so far."""

    def __init__(self, seed: int, counter: int = 0):
        self.key = seed & MASK64
        self.counter = counter

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.key + self.counter * GOLDEN)

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def below(self, m: int) -> int:
        """Uniform-ish integer in [0, m) as ``floor(random() * m)``."""
        if m <= 0:
            raise ValueError("below() needs m >= 1")
        r = int(self.random() * m)
        return r if r < m else m - 1
