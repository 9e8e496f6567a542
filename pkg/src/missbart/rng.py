"""Seeded random-number streams with per-chain splitting.

All samplers take an explicit ``numpy.random.Generator``. Equal seeds give
bitwise-equal streams on a platform; parallel chains get independent,
reproducible streams via ``SeedSequence.spawn``.
"""

from __future__ import annotations

import numpy as np

__all__ = ["rng_from_seed", "split_rngs", "spawn_rng"]


def rng_from_seed(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """Construct a generator from a 64-bit seed (or a SeedSequence)."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def split_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """n independent generators derived from one seed, one per chain/worker."""
    children = np.random.SeedSequence(int(seed)).spawn(n)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def spawn_rng(rng: np.random.Generator) -> np.random.Generator:
    """Split one further independent stream off an existing generator."""
    ss = rng.bit_generator.seed_seq  # type: ignore[attr-defined]
    return np.random.Generator(np.random.PCG64(ss.spawn(1)[0]))
