"""Seeded random streams with deterministic substreams.

A stream is identified by ``(seed, key)`` where ``key`` is a tuple of
non-negative integers. The numpy ``SeedSequence`` spawn-key mechanism maps
each identity to a statistically independent Philox counter stream, so the
output of a substream depends only on its identity and never on the order in
which substreams are created or consumed.
"""

from __future__ import annotations

import numpy as np

__all__ = ["RngStream", "ALGORITHM"]

ALGORITHM = "philox4x64-seedsequence"
_MAX_SEED = 2**64 - 1


class RngStream:
    """A reproducible source of randomness.

    Parameters
    ----------
    seed : int
        Unsigned 64-bit seed.
    key : tuple of int, optional
        Substream index path. ``RngStream(s).substream(1, 7)`` equals
        ``RngStream(s, (1, 7))``.
    """

    algorithm = ALGORITHM

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
        if not 0 <= int(seed) <= _MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        if any(int(k) < 0 for k in key):
            raise ValueError(f"substream indices must be non-negative, got {key}")
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
        self.generator = np.random.Generator(np.random.Philox(seq))

    def substream(self, *index: int) -> "RngStream":
        """Return the child stream at ``key + index`` (fresh state)."""
        return RngStream(self.seed, self.key + tuple(index))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, key={self.key})"
