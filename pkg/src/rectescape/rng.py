"""Deterministic random streams.

All randomness in the package comes from Philox4x64-10 counter-based
generators (as shipped by numpy), so a 64-bit seed reproduces byte-identical
results across runs and platforms.

Stream derivation: the Philox key is the pair ``(seed, h)`` where ``h`` mixes
the stream path with the splitmix64 multiplier::

    h = fold(path):  h <- (h * 0x9E3779B97F4A7C15 + element + 1) mod 2^64

Distinct paths (e.g. per-trial indices) therefore give independent streams
under one seed.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_MIX = 0x9E3779B97F4A7C15


def stream(seed: int, *path: int) -> np.random.Generator:
    """Return the Philox generator for ``seed`` and a stream path."""
    h = 0
    for element in path:
        h = (h * _MIX + (element & _MASK64) + 1) & _MASK64
    bitgen = np.random.Philox(key=np.array([seed & _MASK64, h], dtype=np.uint64))
    return np.random.Generator(bitgen)
