"""Deterministic seed derivation.

Every randomized stage derives child seeds with splitmix64 so that runs are
byte-reproducible regardless of worker count or evaluation order.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 finalization step; a 64-bit mixer with full avalanche."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def mix_seed(seed: int, salt: int) -> int:
    """Derive an independent child seed from (seed, salt), order-sensitive."""
    return splitmix64((seed & _MASK64) ^ splitmix64(salt & _MASK64))
