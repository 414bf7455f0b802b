"""Counter-based deterministic random streams.

Every variate is a pure function of (seed, stream tag, substream, row index):
no hidden generator state, so regeneration is order-insensitive and rows can
be produced in any chunking, or in parallel, with identical results.

The core is the SplitMix64 output function over a keyed counter; uniforms
take the top 53 bits, normals go through the inverse normal CDF.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

__all__ = ["CounterRng"]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SUBSTREAM_SALT = 0xD1342543DE82EF95
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return h


def _mix64_int(x: int) -> int:
    """SplitMix64 finalizer over a python int."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _mix64(x: np.ndarray) -> np.ndarray:
    """Vectorized SplitMix64 finalizer over uint64; relies on wrapping."""
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


class CounterRng:
    """Keyed deterministic stream family.

    One instance covers one (seed, stream tag) pair; independent substreams
    within it are selected per call, e.g. one per generated column.
    """

    def __init__(self, seed: int, stream_tag: str):
        self.seed = int(seed)
        self.stream_tag = stream_tag
        self._stream_key = _mix64_int((self.seed & _MASK64) ^ _fnv1a64(stream_tag.encode("utf-8")))

    def raw(self, substream: int, n: int, start: int = 0) -> np.ndarray:
        """n raw uint64 words for rows [start, start+n)."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        base = _mix64_int(self._stream_key ^ ((substream * _SUBSTREAM_SALT) & _MASK64))
        idx = np.arange(start, start + n, dtype=np.uint64)
        counters = np.uint64(base) + idx * np.uint64(_GOLDEN)
        return _mix64(counters)

    def uniforms(self, substream: int, n: int, start: int = 0) -> np.ndarray:
        """Open-interval (0, 1) doubles; never exactly 0 or 1."""
        bits53 = (self.raw(substream, n, start) >> np.uint64(11)).astype(np.float64)
        return (bits53 + 0.5) * (2.0 ** -53)

    def normals(self, substream: int, n: int, start: int = 0) -> np.ndarray:
        """Standard normals via the inverse CDF of the uniform stream."""
        return ndtri(self.uniforms(substream, n, start))

    def bernoulli(self, substream: int, n: int, p: float, start: int = 0) -> np.ndarray:
        """Boolean array, True with probability p per row."""
        return self.uniforms(substream, n, start) < p
