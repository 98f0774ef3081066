"""Reproducible random streams keyed by ``(seed, stream_id)``.

Each key maps to an independent Philox (counter-based) generator, so parallel
workers that use distinct stream ids never share state.
"""

from __future__ import annotations

import numpy as np


def make_generator(seed: int, stream_id: int = 0) -> np.random.Generator:
    if seed < 0 or stream_id < 0:
        raise ValueError("seed and stream_id must be nonnegative")
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream_id),))
    return np.random.Generator(np.random.Philox(ss))


def open_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform variates on the open interval (0, 1); never 0 or 1 exactly."""
    k = rng.integers(0, 2**53, size=n, dtype=np.uint64)
    return (k.astype(np.float64) + 0.5) * 2.0**-53
