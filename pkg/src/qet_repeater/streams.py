"""Deterministic random streams and order-independent trial execution.

Stream derivation rule: the generator for unit ``index`` of stream ``name``
under master seed ``seed`` is

    PCG64(SeedSequence(entropy=seed, spawn_key=(crc32(name), index)))

A unit is one Monte Carlo trial or one fixed-size block of shots.  Because
each unit owns its stream, results do not depend on how units are scheduled
across workers.  Reductions are done on the per-unit values in unit order.
"""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

SEED_MASK = (1 << 64) - 1


def stream_id(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


def unit_rng(seed: int, name: str, index: int) -> np.random.Generator:
    if seed < 0 or seed > SEED_MASK:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(stream_id(name), int(index)))
    return np.random.Generator(np.random.PCG64(ss))


def _run_chunk(fn, indices):
    return [fn(i) for i in indices]


def map_units(fn: Callable[[int], object], n_units: int, workers: int = 1) -> list:
    """Evaluate ``fn(i)`` for ``i in range(n_units)``; results in index order.

    With ``workers > 1`` the units are split into contiguous chunks and run in
    a process pool; ``fn`` must then be picklable.
    """
    if n_units < 0:
        raise ValueError("n_units must be >= 0")
    if workers <= 1 or n_units < 2:
        return [fn(i) for i in range(n_units)]
    n_chunks = min(n_units, 4 * workers)
    bounds = np.linspace(0, n_units, n_chunks + 1).astype(int)
    chunks = [range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, [fn] * len(chunks), chunks))
    return [r for part in parts for r in part]


def mean_and_stderr(values: Sequence[float]) -> tuple[float, float]:
    """Sample mean and its standard error, summed with ``math.fsum``."""
    n = len(values)
    if n == 0:
        raise ValueError("no samples")
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)
