"""Per-episode seed derivation."""

from __future__ import annotations

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """SplitMix64 output finalizer on a 64-bit integer."""
    z = value & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def episode_seed(master_seed: int, index: int) -> int:
    """Seed of episode ``index``; reproducible without running earlier episodes."""
    return splitmix64((master_seed * GOLDEN_GAMMA + index) & MASK64)
