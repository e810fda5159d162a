"""Portable, seedable random streams for reproducible noise fields.

The generator is SplitMix64 used in counter mode: draw ``i`` of the stream
seeded with ``s`` is ``mix64(s + (i + 1) * GAMMA)`` where ``mix64`` is the
standard SplitMix64 finalizer.  Because every draw is a pure function of
(seed, counter), fields can be generated vectorized or in parallel without
changing the output, and two independent implementations of the same layout
produce bit-identical streams.

Counter layout used by the noise models (n = number of pixels, row-major
pixel index k):

* gaussian field:    pixel k consumes counters 2k and 2k+1 (Box-Muller pair)
* salt & pepper:     pixel k consumes counters 2k (corrupt?) and 2k+1 (salt/pepper)
* uniform field:     pixel k consumes counter k
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = 0xFFFFFFFFFFFFFFFF


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * _MIX1
    z = z ^ (z >> np.uint64(27))
    z = z * _MIX2
    return z ^ (z >> np.uint64(31))


def raw_uint64(seed: int, counters: np.ndarray) -> np.ndarray:
    """SplitMix64 outputs for the given counter values (uint64 array)."""
    s = np.uint64(int(seed) & _MASK)
    with np.errstate(over="ignore"):
        c = counters.astype(np.uint64)
        return _mix64(s + (c + np.uint64(1)) * _GAMMA)


def uniforms(seed: int, counters: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) doubles from the top 53 bits of each raw output."""
    bits = raw_uint64(seed, counters) >> np.uint64(11)
    return bits.astype(np.float64) * (1.0 / (1 << 53))


def uniform_field(shape: tuple[int, int], seed: int) -> np.ndarray:
    """Uniform [0, 1) field; pixel k uses counter k."""
    n = int(np.prod(shape))
    return uniforms(seed, np.arange(n, dtype=np.uint64)).reshape(shape)


def normal_field(shape: tuple[int, int], mean: float, sigma: float,
                 seed: int) -> np.ndarray:
    """I.i.d. N(mean, sigma^2) field via Box-Muller.

    Pixel k uses counters 2k and 2k+1:
    ``mean + sigma * sqrt(-2 ln(1 - u_{2k})) * cos(2 pi u_{2k+1})``.
    """
    n = int(np.prod(shape))
    idx = np.arange(n, dtype=np.uint64)
    u1 = uniforms(seed, np.uint64(2) * idx)
    u2 = uniforms(seed, np.uint64(2) * idx + np.uint64(1))
    # 1 - u1 lies in (0, 1], so the log is finite
    z = np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)
    return (mean + sigma * z).reshape(shape)
