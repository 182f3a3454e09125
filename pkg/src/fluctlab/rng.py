"""Counter-based splittable random streams.

Every draw is a pure function of (seed, replica, stream, counter), built
from the splitmix64 finalizer.  This makes any site's weight recomputable
in isolation, which is what the shared-realization couplings need, and
makes ensemble output independent of thread scheduling.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U64 = np.uint64

_GOLD = U64(0x9E3779B97F4A7C15)
_SEED_SALT = U64(0x243F6A8885A308D3)
_REP_SALT = U64(0xB5297A4D3A2EC4C1)
_STREAM_SALT = U64(0x68E31DA4A32F58CD)

# stream ids, one per independent randomness consumer
STREAM_WEIGHTS = 0       # LPP site weights, counter = site index
STREAM_GEOM = 1          # geometric boundary paddings
STREAM_INIT = 2          # TASEP initial occupancy, counter = absolute site
STREAM_CLOCK = 3         # TASEP particle clocks, keyed by initial site


@njit(inline="always", cache=True)
def mix64(z):
    z = U64(z)
    z = (z ^ (z >> U64(30))) * U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> U64(27))) * U64(0x94D049BB133111EB)
    return z ^ (z >> U64(31))


@njit(inline="always", cache=True)
def stream_key(seed, replica, stream):
    k = mix64(U64(seed) ^ _SEED_SALT)
    k = mix64(k ^ (U64(replica) * _REP_SALT))
    return mix64(k ^ (U64(stream) * _STREAM_SALT))


@njit(inline="always", cache=True)
def counter_u64(key, counter):
    return mix64(U64(key) + U64(counter) * _GOLD)


@njit(inline="always", cache=True)
def counter_uniform(key, counter):
    """Uniform double in [0, 1) from the 53 high bits."""
    return float(counter_u64(key, counter) >> U64(11)) * 1.1102230246251565e-16


@njit(inline="always", cache=True)
def counter_exponential(key, counter, rate):
    """Exp(rate) by inverse CDF, -ln(1-u)/rate with u in [0, 1)."""
    return -np.log1p(-counter_uniform(key, counter)) / rate


@njit(inline="always", cache=True)
def counter_geometric(key, counter, fail_prob):
    """Number of failures before a success: P(n) = (1-q) q^n, q = fail_prob."""
    u = counter_uniform(key, counter)
    return int(np.log1p(-u) / np.log(fail_prob))


@njit(inline="always", cache=True)
def substream_key(key, tag):
    """Split an existing stream key by an integer tag (e.g. a lattice site)."""
    return mix64(U64(key) ^ (U64(tag) * _STREAM_SALT))


def uniforms(seed: int, replica: int, stream: int, n: int) -> np.ndarray:
    """First n uniforms of a stream, for tests and python-side sampling."""
    key = U64(stream_key(seed, replica, stream))
    out = np.empty(n)
    for i in range(n):
        out[i] = counter_uniform(key, U64(i))
    return out
