"""Seeded random streams.

One root seed feeds any number of independent named streams (dataset
sampling, initialization, batch shuffling, ...). Streams use the Philox
counter-based generator keyed by the seed and a stable hash of the name, so
adding a new consumer never shifts the numbers another consumer sees.
"""

import zlib
from dataclasses import dataclass

import numpy as np

_MAX_SEED = 2**64 - 1


def _name_key(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


@dataclass(frozen=True)
class RngSeed:
    """Root seed for all randomness of a run."""

    seed: int
    path: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        """Validate seed range."""
        if not 0 <= int(self.seed) <= _MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def child(self, name: str) -> "RngSeed":
        """Derive an independent sub-seed for a named component."""
        return RngSeed(self.seed, self.path + (_name_key(name),))

    def stream(self, name: str) -> np.random.Generator:
        """Return a fresh generator for the named stream.

        Identical (seed, path, name) always yield bitwise-identical draws.
        """
        sequence = np.random.SeedSequence(
            entropy=int(self.seed),
            spawn_key=self.path + (_name_key(name),),
        )
        return np.random.Generator(np.random.Philox(sequence))
