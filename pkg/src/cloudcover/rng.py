"""Seeded, splittable random streams.

Every stochastic routine in the package draws from :func:`substream`, which
maps ``(seed, index)`` to an independent PCG64 generator through numpy's
``SeedSequence`` spawn keys. Work is partitioned into fixed-size blocks of
paths, block ``k`` always using ``substream(seed, k)``, so an estimate depends
only on the seed and the number of paths, never on how blocks are scheduled
across workers.

Gaussian variates come from ``Generator.standard_normal`` (numpy's ziggurat
transform of the PCG64 output).
"""

from __future__ import annotations

import numpy as np

#: Paths simulated per block. Part of the determinism contract: changing it
#: changes every seeded result.
BLOCK_SIZE = 65_536


def substream(seed: int, index: int = 0) -> np.random.Generator:
    """Return the generator for block ``index`` of stream ``seed``."""
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def blocks(n_paths: int, block_size: int = BLOCK_SIZE) -> list[tuple[int, int]]:
    """Split ``n_paths`` into ``(block_index, size)`` pairs in stream order."""
    out = []
    k = 0
    remaining = n_paths
    while remaining > 0:
        m = min(block_size, remaining)
        out.append((k, m))
        remaining -= m
        k += 1
    return out
