"""Counter-based random streams.

Each stream is a Philox generator keyed by ``(seed, stream_id)``; draws advance
the counter only, so a stream's sequence depends on nothing but its key.
"""
from __future__ import annotations

import numpy as np

_U64 = (1 << 64) - 1


class RngStream:
    """Reproducible random stream identified by ``(seed, stream_id)``."""

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & _U64
        self.stream_id = int(stream_id) & _U64
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def normal(self, size=None):
        return self._gen.standard_normal(size)

    def uniform(self, size=None):
        return self._gen.random(size)

    def substream(self, stream_id: int) -> "RngStream":
        """Fresh stream with the same seed and another id."""
        return RngStream(self.seed, stream_id)
