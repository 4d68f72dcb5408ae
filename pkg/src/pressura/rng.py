"""Buffered uniform draws for the compiled kernels."""

from __future__ import annotations

import numpy as np

from ._vm import DRAWS_PER_STEP


class RandomStream:
    """PCG64 uniforms served through a refillable buffer.

    The kernels read ``buf[pos[0]]`` and advance ``pos``. Refilling keeps the
    unread tail in order, so the consumed sequence depends only on the seed.
    """

    def __init__(self, seed=None, size: int = 1 << 16):
        if isinstance(seed, np.random.Generator):
            self.generator = seed
        else:
            self.generator = np.random.Generator(np.random.PCG64(seed))
        self.buf = self.generator.random(size)
        self.pos = np.zeros(1, np.int64)

    def ensure(self, k: int = DRAWS_PER_STEP) -> None:
        p = int(self.pos[0])
        if len(self.buf) - p >= k:
            return
        tail = self.buf[p:].copy()
        self.buf[: len(tail)] = tail
        self.buf[len(tail):] = self.generator.random(len(self.buf) - len(tail))
        self.pos[0] = 0

    def random(self) -> float:
        self.ensure(1)
        u = self.buf[self.pos[0]]
        self.pos[0] += 1
        return float(u)

    def state(self) -> tuple:
        """Snapshot usable to check two streams are in lockstep."""
        return (self.generator.bit_generator.state["state"]["state"], int(self.pos[0]))


def as_stream(rng) -> RandomStream:
    if isinstance(rng, RandomStream):
        return rng
    return RandomStream(rng)
