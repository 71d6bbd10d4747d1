"""Counter-based uniforms keyed by (seed, stream, global sample index).

Sample ``i`` always consumes the same Philox counter blocks, so any
contiguous range of samples can be regenerated independently of how the
work is split across workers.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.stats import qmc

_WORDS_PER_BLOCK = 4
_INV_2_53 = 2.0 ** -53


def _key(seed: int, stream: int) -> int:
    return (int(seed) & (2**64 - 1)) | ((int(stream) & (2**64 - 1)) << 64)


def uniforms(seed: int, start: int, count: int, width: int, stream: int = 0) -> np.ndarray:
    """Uniforms in [0, 1) for samples ``start .. start+count-1``, shape (count, width)."""
    blocks = math.ceil(width / _WORDS_PER_BLOCK)
    counter = int(start) * blocks
    words = [(counter >> (64 * i)) & (2**64 - 1) for i in range(4)]
    bitgen = np.random.Philox(key=_key(seed, stream), counter=words)
    raw = bitgen.random_raw(count * blocks * _WORDS_PER_BLOCK)
    raw = raw.reshape(count, blocks * _WORDS_PER_BLOCK)[:, :width]
    return (raw >> np.uint64(11)).astype(np.float64) * _INV_2_53


def sobol_uniforms(seed: int, start: int, count: int, width: int, stream: int = 0) -> np.ndarray:
    """Scrambled Sobol points with the same (start, count) addressing as :func:`uniforms`."""
    # scrambling draws from a generator built on a SeedSequence, which scipy can spawn from
    scramble_rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))
    engine = qmc.Sobol(d=width, scramble=True, seed=scramble_rng)
    if start:
        engine.fast_forward(start)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return engine.random(count)
