"""Deterministic random generation for instances and tests.

The generator is splitmix64 with the usual constants, written out in full
so that a stream is reproducible from the seed alone on any platform and
in any language.  No state other than the 64-bit counter is kept.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SeededGenerator:
    """splitmix64 stream; identical seeds give identical streams."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive, by rejection sampling."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            v = self.next_u64()
            if v < limit:
                return lo + (v % span)

    def fraction(self, lo, hi, max_den: int = 100) -> Fraction:
        """Uniform-ish rational in [lo, hi] with a random denominator
        at most max_den (before reduction against lo and hi)."""
        lo = Fraction(lo)
        hi = Fraction(hi)
        den = self.integer(1, max_den)
        num = self.integer(0, den)
        return lo + (hi - lo) * Fraction(num, den)

    def choice(self, items):
        return items[self.integer(0, len(items) - 1)]
