"""Seed derivation for reproducible, replayable randomness.

Splitting rule (the one documented rule every stochastic operation uses):
the generator for draw ``index`` under a session root seed is

    Generator(PCG64(SeedSequence(root_seed, spawn_key=(index,))))

Batch simulations that need one independent stream per point extend the
spawn key with the point index: ``spawn_key=(index, point)``.  A record
that stores ``(root_seed, index)`` can therefore be regenerated
bit-exactly at any time.
"""

from __future__ import annotations

import numpy as np


def generator(root_seed: int, *path: int) -> np.random.Generator:
    """Independent generator for the sub-stream addressed by ``path``."""
    ss = np.random.SeedSequence(root_seed, spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.PCG64(ss))
