"""Reproducible, order-independent random streams.

Every replicate of every experiment owns a Philox4x64 stream. The key is
derived once from the master seed; the replicate index and a stream tag
occupy the two high words of the 256-bit counter, so the stream for
``(master_seed, stream, replicate)`` is a pure function of those three
integers. Nothing depends on how replicates are scheduled across workers.

Draws consume the low counter words, which leaves room for 2**130
variates per replicate before two streams could overlap.
"""
from functools import lru_cache

import numpy as np

from .special_functions import std_normal_quantile

__all__ = [
    "replicate_stream",
    "uniforms",
    "normals",
    "centered_uniforms",
]

_TWO_M53 = 2.0 ** -53
_MASK64 = (1 << 64) - 1


@lru_cache(maxsize=256)
def _key_words(master_seed):
    seq = np.random.SeedSequence(master_seed & _MASK64)
    return tuple(int(w) for w in seq.generate_state(2, dtype=np.uint64))


def _key(master_seed):
    return np.array(_key_words(int(master_seed)), dtype=np.uint64)


def replicate_stream(master_seed, replicate=0, stream=0):
    """Return the bit generator for one replicate."""
    counter = np.array(
        [0, 0, int(stream) & _MASK64, int(replicate) & _MASK64], dtype=np.uint64
    )
    return np.random.Philox(key=_key(master_seed), counter=counter)


def uniforms(bitgen, size):
    """Open-interval uniforms ``(j + 0.5) / 2**53`` from 64-bit raw draws."""
    raw = bitgen.random_raw(size)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53


def normals(bitgen, size, loc=0.0, scale=1.0):
    """Normal variates by inversion of the uniform stream."""
    return loc + scale * std_normal_quantile(uniforms(bitgen, size))


def centered_uniforms(bitgen, size, loc=0.0, scale=1.0):
    """Uniform variates with mean ``loc`` and standard deviation ``scale``."""
    half_width = scale * np.sqrt(3.0)
    return loc + half_width * (2.0 * uniforms(bitgen, size) - 1.0)
