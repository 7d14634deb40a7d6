"""Deterministic, splittable random streams.

All randomness in the package flows from a single 64-bit seed through
:class:`RngStream`. Streams are backed by the counter-based Philox
generator, whose output is identical across platforms for a given seed,
and are split into statistically independent children by extending the
seed-sequence spawn key. The algorithm name is recorded in run metadata so
archives stay reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ALGORITHM = "philox4x64 (numpy SeedSequence entropy=seed, spawn_key=path)"


@dataclass(frozen=True)
class RngStream:
    seed: int
    path: tuple[int, ...] = field(default_factory=tuple)

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(sequence))

    def child(self, index: int) -> "RngStream":
        """Independent stream derived by extending the spawn key."""
        return RngStream(self.seed, self.path + (int(index),))

    def children(self, count: int) -> list["RngStream"]:
        return [self.child(i) for i in range(count)]

    def describe(self) -> dict:
        return {"seed": int(self.seed), "path": list(self.path), "algorithm": ALGORITHM}
