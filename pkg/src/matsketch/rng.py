"""Seeding helpers.

A single 64-bit seed is expanded into per-trial generators with a
counter-based scheme: trial ``i`` of a run seeded with ``s`` always uses
``SeedSequence([s, i])``.  Trial streams therefore never depend on the total
trial count, and trials can run in any order (or in parallel) without
changing results.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _entropy(seed: int) -> int:
    return int(seed) & _MASK64


def as_generator(seed) -> np.random.Generator:
    """Return ``seed`` itself if it already is a Generator, else seed one."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence([_entropy(seed)]))


def spawn(seed: int, *path: int) -> np.random.Generator:
    """Generator for sub-stream ``path`` (e.g. a trial index) of ``seed``."""
    return np.random.default_rng(
        np.random.SeedSequence([_entropy(seed), *[int(p) for p in path]])
    )
