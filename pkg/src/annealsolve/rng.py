"""Deterministic variate streams from a counter-based generator.

Streams are keyed by (seed, stream): stream t of an experiment sees the same
variates regardless of how many other streams run or in what order, so
parallel trajectories are reproducible independent of scheduling.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator keyed by (seed, stream)."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be non-negative")
    key = np.array([seed & _MASK, stream & _MASK], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def uniforms(seed: int, n: int, stream: int = 0) -> np.ndarray:
    """n uniforms on [0, 1); element k is the step-k variate of the stream."""
    return generator(seed, stream).random(n)


def uniform_matrix(seed: int, n_streams: int, n: int) -> np.ndarray:
    """Row t holds the uniforms of stream t; shape (n_streams, n)."""
    out = np.empty((n_streams, n))
    for t in range(n_streams):
        out[t] = generator(seed, t).random(n)
    return out


def normals(seed: int, n: int, stream: int = 0) -> np.ndarray:
    return generator(seed, stream).standard_normal(n)
