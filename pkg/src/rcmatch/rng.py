"""SplitMix64 random stream shared by the Python and compiled kernels.

Both backends draw from the same generator with the same rejection rule, so a
given seed yields the same action log whichever backend runs it.
"""
from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Small deterministic generator; ``state`` is a plain 64-bit integer."""

    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def randbelow(self, n: int) -> int:
        # Reject the lowest 2**64 mod n values so x % n is exactly uniform.
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        threshold = ((1 << 64) - n) % n
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % n

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def copy(self) -> "SplitMix64":
        return SplitMix64(self.state)

    def __repr__(self) -> str:
        return f"SplitMix64(state={self.state:#018x})"


def derive_seed(seed: int, *path: int) -> int:
    """Seed for an independent stream identified by ``(seed, *path)``.

    Trial ``t`` of a batch seeded with ``S`` uses ``derive_seed(S, t, purpose)``,
    so trials are reproducible regardless of execution order.
    """
    z = mix64(seed ^ 0x5DEECE66D)
    for p in path:
        z = mix64(z ^ mix64((p + 1) * GOLDEN))
    return z


def stream(seed: int, *path: int) -> SplitMix64:
    return SplitMix64(derive_seed(seed, *path))
