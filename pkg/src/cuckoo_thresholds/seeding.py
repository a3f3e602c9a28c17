"""Deterministic 64-bit seed derivation.

All randomness in this package flows from explicit 64-bit seeds through the
splitmix64 finalizer, so every run is reproducible from its seed alone:

    mix64(x): x += 0x9E3779B97F4A7C15            (mod 2**64)
              x = (x ^ x >> 30) * 0xBF58476D1CE4E5B9
              x = (x ^ x >> 27) * 0x94D049BB133111EB
              x =  x ^ x >> 31

Streams are the classic splitmix64 generator (state += golden gamma, output
the finalizer of the state); bounded draws use rejection sampling, so they
are exactly uniform.
"""

from __future__ import annotations

__all__ = ["mix64", "SplitMix64"]

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """The splitmix64 finalizer of x + gamma; a stateless 64-bit mixer."""
    x = (x + _GAMMA) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class SplitMix64:
    """Sequential splitmix64 stream; python twin of the jitted kernel RNG."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        x = self.state
        x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
        return x ^ (x >> 31)

    def below(self, n: int) -> int:
        """Unbiased draw in [0, n); rejection keeps it exactly uniform."""
        if n <= 0:
            raise ValueError(f"bound must be positive, got {n}")
        threshold = (-n) % n  # == 2**64 mod n in 64-bit arithmetic
        while True:
            z = self.next_u64()
            if z >= threshold:
                return z % n
