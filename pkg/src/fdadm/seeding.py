"""Deterministic per-task random generators.

Every random quantity in an experiment derives from the scenario seed
plus a structured key (stream tag, point index, ...), so sweep points
can run in any order, or concurrently, and still reproduce bit-identical
results.
"""
from __future__ import annotations

import numpy as np

# stream tags, one per consumer of scenario randomness
STREAM_EVE_PLACEMENT = 1
STREAM_SECRECY = 2
STREAM_BER = 3
STREAM_BENCH = 4


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for stream ``key`` of the experiment seeded by ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed),
                                spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)
