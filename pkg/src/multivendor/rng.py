"""Counter-based random streams that reproduce bit-for-bit anywhere.

Every Monte Carlo unit of work (a trial, or a (trial, period) pair) gets its
own 64-bit seed derived from the master seed, and draws from a SplitMix64
stream started at that seed. All arithmetic is modulo 2**64.

    mix64(z):
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    derive_seed(master, i0, i1, ...):
        h = mix64(master)
        for i in indices: h = mix64(h + GAMMA * (i + 1))

    stream(seed): the j-th output (j = 0, 1, ...) is mix64(seed + GAMMA * (j + 1))

    uniform = (output >> 11) * 2**-53, in [0, 1)

with GAMMA = 0x9E3779B97F4A7C15. Because outputs depend only on (seed, j),
units can be evaluated in any order or in parallel with identical results.
"""

from __future__ import annotations

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MASK = (1 << 64) - 1
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_SCALE = 2.0**-53


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * _M1) & MASK
    z = ((z ^ (z >> 27)) * _M2) & MASK
    return z ^ (z >> 31)


def derive_seed(master: int, *indices: int) -> int:
    h = mix64(master)
    for i in indices:
        h = mix64(h + GAMMA * (i + 1))
    return h


def uniform(seed: int, j: int) -> float:
    """The j-th uniform of the stream started at ``seed`` (scalar reference path)."""
    return (mix64(seed + GAMMA * (j + 1)) >> 11) * _SCALE


# numpy uint64 arithmetic wraps modulo 2**64, matching the scalar definitions.


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def derive_seeds(master: int, *index_arrays: np.ndarray) -> np.ndarray:
    """Vectorised ``derive_seed``; index arrays broadcast against each other."""
    arrays = np.broadcast_arrays(*[np.asarray(a, dtype=np.uint64) for a in index_arrays])
    h = np.full(arrays[0].shape if arrays else (), mix64(master), dtype=np.uint64)
    with np.errstate(over="ignore"):
        for idx in arrays:
            h = _mix64_array(h + np.uint64(GAMMA) * (idx + np.uint64(1)))
    return h


def uniforms(seeds: np.ndarray, count: int) -> np.ndarray:
    """First ``count`` uniforms of each seed's stream; shape ``seeds.shape + (count,)``."""
    seeds = np.asarray(seeds, dtype=np.uint64)
    j = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        out = _mix64_array(seeds[..., None] + np.uint64(GAMMA) * j)
    return (out >> np.uint64(11)).astype(np.float64) * _SCALE


def trial_uniforms(seed: int, trials: int, count: int) -> np.ndarray:
    """``(trials, count)`` uniforms, row t drawn from the stream of derive_seed(seed, t)."""
    return uniforms(derive_seeds(seed, np.arange(trials)), count)
