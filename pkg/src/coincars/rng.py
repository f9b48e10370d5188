"""Deterministic random-stream derivation shared by all seeded generators.

Realization ``i`` of master seed ``s`` uses an independent PCG64 stream
keyed by the SplitMix64 finalizer applied to ``s + (i + 1) * GOLDEN`` (all
arithmetic modulo 2^64).  The mixing function is spelled out here so the
streams can be reproduced in any language:

    z  = (s + (i + 1) * 0x9E3779B97F4A7C15) mod 2^64
    z ^= z >> 30;  z = z * 0xBF58476D1CE4E5B9 mod 2^64
    z ^= z >> 27;  z = z * 0x94D049BB133111EB mod 2^64
    z ^= z >> 31
"""

from __future__ import annotations

import numpy as np

__all__ = ["mix64", "stream_rng"]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(seed: int, index: int) -> int:
    """SplitMix64 finalizer of ``seed + (index + 1) * GOLDEN`` (mod 2^64)."""
    z = (int(seed) + (int(index) + 1) * _GOLDEN) & _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def stream_rng(seed: int, index: int) -> np.random.Generator:
    """Independent, reproducible generator for one realization index."""
    return np.random.Generator(np.random.PCG64(mix64(seed, index)))
