"""Deterministic seeding and the inside/outside balanced tuple sampler.

Every random draw in the package comes from a generator built by
:func:`trial_rng`, which derives an independent stream from
``(master seed, label, index)``.  Trials therefore produce the same numbers
whether they run serially or on a thread pool.
"""

from __future__ import annotations

import zlib
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .linalg import random_complex

_MASK32 = 0xFFFFFFFF


def _label_key(label: str) -> int:
    return zlib.crc32(label.encode("utf-8"))


def trial_rng(master: int, label: str, index: int = 0) -> np.random.Generator:
    if master < 0:
        raise ValueError("seed must be non-negative")
    entropy = [master & _MASK32, (master >> 32) & _MASK32, _label_key(label), int(index)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def run_trials(fn, count: int, workers: int = 1) -> list:
    """Evaluate ``fn(i)`` for ``i in range(count)``; results come back in index order."""
    if workers <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def gaussian_tuple(g: int, n: int, rng: np.random.Generator) -> np.ndarray:
    return random_complex((g, n, n), rng)


def calibrate_scale(margin, g: int, n: int, rng: np.random.Generator, batch: int = 64, iters: int = 40) -> float:
    """Find ``t`` so that about half of ``t * Z`` (Z complex Gaussian) has positive margin.

    ``margin`` must be positive at 0 with a superlevel set that is star-shaped
    about 0 along rays (true for every spectrahedron and spectraball here), so
    the inside fraction is non-increasing in ``t`` and bisection applies.
    """
    Z = [gaussian_tuple(g, n, rng) for _ in range(batch)]

    def inside_fraction(t):
        return np.mean([margin(t * z) > 0 for z in Z])

    lo, hi = 0.0, 1.0
    while inside_fraction(hi) >= 0.5:
        lo, hi = hi, 2.0 * hi
        if hi > 1e8:
            return hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if inside_fraction(mid) >= 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
