"""Continuous-time TASEP on a finite window with two-sided Bernoulli data.

Dynamics follow the jump-attempt construction: each particle carries its
own rate-1 Poisson clock (keyed by its initial site) and at every ring
attempts a right jump, which succeeds iff the target is empty.  By
memorylessness this is the exact exclusion dynamics, and because all
randomness is keyed by absolute lattice sites, enlarging the window leaves
the realization in the bulk unchanged sample-for-sample.

Sites outside [lo, hi] are frozen at their initial Bernoulli draw; the
window is sized so that edge effects reach observed sites with negligible
probability (the influence front advances at most one site per clock ring,
so a margin of a few sqrt(t) suffices).  Observations inside the inner
buffer zone raise WindowBreachError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit, prange

from .params import ParamError, StreamKey, TasepParams
from .rng import (
    STREAM_CLOCK,
    STREAM_INIT,
    counter_uniform,
    stream_key,
    substream_key,
)


class WindowBreachError(RuntimeError):
    """An observation touched the window edge buffer; the replica is invalid."""


@dataclass(frozen=True)
class LatticeWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if not (self.lo < 0 < self.hi):
            raise ParamError(f"window [{self.lo}, {self.hi}] must contain the origin bond")

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1


def window_for(t: float, margin: float) -> LatticeWindow:
    """Symmetric window [-(t+margin), t+margin]; degenerate t=0 gives the
    minimal window around the origin bond."""
    if t < 0 or margin < 0:
        raise ParamError("t and margin must be nonnegative")
    r = max(1, math.ceil(t + margin))
    return LatticeWindow(-r, r)


def default_margin(t: float) -> float:
    """Margin making edge effects at observed sites (|j| <= t) rarer than
    ~1e-6: the frozen-edge influence front is dominated by a rate-1 Poisson
    counter, so a few sqrt(t) beyond the light cone is enough."""
    return max(20.0, 6.5 * math.sqrt(max(t, 1.0)))


# --------------------------------------------------------------------------
# kernels
# --------------------------------------------------------------------------

@njit(inline="always", cache=True)
def _sift_down(heap_t, heap_p, size, i):
    while True:
        left = 2 * i + 1
        if left >= size:
            return
        right = left + 1
        small = left
        if right < size and heap_t[right] < heap_t[left]:
            small = right
        if heap_t[small] >= heap_t[i]:
            return
        heap_t[i], heap_t[small] = heap_t[small], heap_t[i]
        heap_p[i], heap_p[small] = heap_p[small], heap_p[i]
        i = small


@njit(cache=True)
def _heapify(heap_t, heap_p, size):
    for i in range(size // 2 - 1, -1, -1):
        _sift_down(heap_t, heap_p, size, i)


@njit(cache=True)
def _init_replica(seed, replica, lo, hi, rho_minus, rho_plus):
    width = hi - lo + 1
    occ = np.zeros(width, np.uint8)
    ikey = stream_key(seed, replica, STREAM_INIT)
    npart = 0
    for x in range(lo, hi + 1):
        p = rho_minus if x <= 0 else rho_plus
        if counter_uniform(ikey, x) < p:
            occ[x - lo] = 1
            npart += 1
    hp1_occupied = 1 if counter_uniform(ikey, hi + 1) < rho_plus else 0
    pos = np.empty(npart, np.int64)
    keys = np.empty(npart, np.uint64)
    k = 0
    ckey = stream_key(seed, replica, STREAM_CLOCK)
    for x in range(lo, hi + 1):
        if occ[x - lo] == 1:
            pos[k] = x
            keys[k] = substream_key(ckey, x)
            k += 1
    return occ, pos, keys, hp1_occupied


@njit(cache=True)
def _fresh_heap(pos, keys):
    npart = pos.shape[0]
    draws = np.zeros(npart, np.int64)
    heap_t = np.empty(npart, np.float64)
    heap_p = np.empty(npart, np.int64)
    for k in range(npart):
        heap_t[k] = -np.log1p(-counter_uniform(keys[k], 0))
        heap_p[k] = k
    _heapify(heap_t, heap_p, npart)
    return draws, heap_t, heap_p, npart


@njit(cache=True)
def _advance(occ, pos, keys, draws, heap_t, heap_p, heap_size,
             lo, hi, hp1_occupied, t_end, j0, watch_bonds, crossings):
    """Run all attempts with ring time <= t_end.  Returns (j0, heap_size)."""
    nwatch = watch_bonds.shape[0]
    while heap_size > 0:
        t = heap_t[0]
        if t > t_end:
            break
        pid = heap_p[0]
        x = pos[pid]
        exited = False
        if x < hi:
            if occ[x + 1 - lo] == 0:
                occ[x - lo] = 0
                occ[x + 1 - lo] = 1
                pos[pid] = x + 1
                if x == 0:
                    j0 += 1
                for b in range(nwatch):
                    if watch_bonds[b] == x:
                        crossings[b] += 1
        elif hp1_occupied == 0:
            # jumps out of the window and can never return
            occ[x - lo] = 0
            exited = True
        if exited:
            heap_size -= 1
            heap_t[0] = heap_t[heap_size]
            heap_p[0] = heap_p[heap_size]
            if heap_size > 0:
                _sift_down(heap_t, heap_p, heap_size, 0)
        else:
            draws[pid] += 1
            heap_t[0] = t - np.log1p(-counter_uniform(keys[pid], draws[pid]))
            _sift_down(heap_t, heap_p, heap_size, 0)
    return j0, heap_size


@njit(cache=True)
def _height_range(occ, lo, j0, j_lo, j_hi):
    out = np.empty(j_hi - j_lo + 1, np.int64)
    h = 2 * j0
    if j_lo <= 0 <= j_hi:
        out[0 - j_lo] = h
    hr = h
    for j in range(1, j_hi + 1):
        hr += 1 - 2 * occ[j - lo]
        if j >= j_lo:
            out[j - j_lo] = hr
    hl = h
    for j in range(0, j_lo, -1):
        hl -= 1 - 2 * occ[j - lo]
        if j - 1 <= j_hi:
            out[j - 1 - j_lo] = hl
    return out


@njit(parallel=True, cache=True)
def _height_ensemble_kernel(seed, rep_offset, replicas, lo, hi, rho_minus, rho_plus,
                            t_end, j_lo, j_hi):
    ncols = j_hi - j_lo + 1
    heights = np.empty((replicas, ncols), np.int64)
    j0s = np.empty(replicas, np.int64)
    bonds = np.empty(0, np.int64)
    for r in prange(replicas):
        occ, pos, keys, hp1 = _init_replica(seed, rep_offset + r, lo, hi,
                                            rho_minus, rho_plus)
        draws, heap_t, heap_p, hs = _fresh_heap(pos, keys)
        crossings = np.zeros(0, np.int64)
        j0, _ = _advance(occ, pos, keys, draws, heap_t, heap_p, hs,
                         lo, hi, hp1, t_end, 0, bonds, crossings)
        heights[r] = _height_range(occ, lo, j0, j_lo, j_hi)
        j0s[r] = j0
    return heights, j0s


# --------------------------------------------------------------------------
# stateful single-replica interface
# --------------------------------------------------------------------------

@dataclass
class TasepState:
    """Occupancy window, bond-crossing counter and event clock for one
    replica; advanced in place by step_to_time."""

    window: LatticeWindow
    key: StreamKey
    occ: np.ndarray
    pos: np.ndarray
    clock_keys: np.ndarray
    draws: np.ndarray
    heap_t: np.ndarray
    heap_p: np.ndarray
    heap_size: int
    hp1_occupied: int
    j0: int = 0
    clock: float = 0.0
    buffer: int = 0
    watch_bonds: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64))
    crossings: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64))

    def occupancy(self, x: int) -> int:
        w = self.window
        if not w.lo <= x <= w.hi:
            raise ParamError(f"site {x} outside window [{w.lo}, {w.hi}]")
        return int(self.occ[x - w.lo])

    def particle_count(self) -> int:
        return int(self.occ.sum())


def _state_from_arrays(window, key, occ, pos, keys, hp1, buffer, watch_bonds):
    draws, heap_t, heap_p, hs = _fresh_heap(pos, keys)
    bonds = np.asarray(watch_bonds, dtype=np.int64)
    return TasepState(
        window=window, key=key, occ=occ, pos=pos, clock_keys=keys, draws=draws,
        heap_t=heap_t, heap_p=heap_p, heap_size=int(hs), hp1_occupied=int(hp1),
        buffer=int(buffer), watch_bonds=bonds,
        crossings=np.zeros(len(bonds), np.int64),
    )


def init_two_sided(tp: TasepParams, window: LatticeWindow, key: StreamKey,
                   buffer: int = 0, watch_bonds=()) -> TasepState:
    """Bernoulli(rho_minus) occupancies for x <= 0, Bernoulli(rho_plus) for
    x > 0, all keyed by absolute site; j0 = 0, clock = 0.

    ``watch_bonds`` lists sites x whose bond (x, x+1) gets an independent
    crossing counter (for current-consistency checks)."""
    occ, pos, keys, hp1 = _init_replica(key.seed, key.replica, window.lo, window.hi,
                                        tp.rho_minus, tp.rho_plus)
    return _state_from_arrays(window, key, occ, pos, keys, hp1, buffer, watch_bonds)


def init_from_occupancy(window: LatticeWindow, occupied_sites, key: StreamKey,
                        buffer: int = 0, watch_bonds=()) -> TasepState:
    """Deterministic initial configuration (for targeted tests); clocks are
    still keyed by initial site."""
    occ = np.zeros(window.width, np.uint8)
    sites = sorted(set(int(x) for x in occupied_sites))
    for x in sites:
        if not window.lo <= x <= window.hi:
            raise ParamError(f"site {x} outside window")
        occ[x - window.lo] = 1
    pos = np.array(sites, dtype=np.int64)
    ckey = np.uint64(stream_key(key.seed, key.replica, STREAM_CLOCK))
    keys = np.array([substream_key(ckey, np.uint64(x & (2**64 - 1))) for x in sites], dtype=np.uint64)
    return _state_from_arrays(window, key, occ, pos, keys, 0, buffer, watch_bonds)


def step_to_time(state: TasepState, t_end: float) -> TasepState:
    """Execute the exact dynamics up to t_end (in place)."""
    if t_end < state.clock:
        raise ParamError(f"t_end={t_end} is before the state clock {state.clock}")
    j0, hs = _advance(state.occ, state.pos, state.clock_keys, state.draws,
                      state.heap_t, state.heap_p, state.heap_size,
                      state.window.lo, state.window.hi, state.hp1_occupied,
                      t_end, state.j0, state.watch_bonds, state.crossings)
    state.j0 = int(j0)
    state.heap_size = int(hs)
    state.clock = float(t_end)
    return state


def _check_safe(state: TasepState, j_lo: int, j_hi: int) -> None:
    lo_ok = state.window.lo + state.buffer
    hi_ok = state.window.hi - state.buffer
    if j_lo < lo_ok or j_hi > hi_ok:
        raise WindowBreachError(
            f"observation [{j_lo}, {j_hi}] touches the edge buffer "
            f"(safe range [{lo_ok}, {hi_ok}])")


@dataclass(frozen=True)
class HeightProfile:
    """h(j) for j in [j_lo, j_hi]; adjacent increments are +-1, h(j)+j is
    even, and h(0) = 2*j0."""

    j_lo: int
    values: np.ndarray

    def h(self, j: int) -> int:
        return int(self.values[j - self.j_lo])


def height_at(state: TasepState, j_lo: int, j_hi: int) -> HeightProfile:
    if j_lo > j_hi:
        raise ParamError("empty height range")
    _check_safe(state, j_lo, j_hi)
    vals = _height_range(state.occ, state.window.lo, state.j0, j_lo, j_hi)
    return HeightProfile(j_lo, vals)


def current_at(state: TasepState, y: float, t: float) -> int:
    """Current past the speed-y observer, (h_t([yt]) - [yt]) / 2."""
    if abs(t - state.clock) > 1e-9:
        raise ParamError(f"state is at clock {state.clock}, not t={t}")
    j = math.floor(y * t)
    h = height_at(state, j, j).h(j)
    if (h + j) % 2 != 0:
        raise AssertionError("height parity violated; implementation bug")
    return (h - j) // 2


def height_ensemble(tp: TasepParams, t: float, j_lo: int, j_hi: int,
                    base_seed: int, replicas: int,
                    margin: float | None = None,
                    rep_offset: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Heights h_t(j) for j in [j_lo, j_hi] over an ensemble (replica r uses
    StreamKey(base_seed, rep_offset + r)).  Returns (heights, j0s)."""
    if replicas < 1:
        raise ParamError("replicas must be >= 1")
    if margin is None:
        margin = default_margin(t)
    reach = max(abs(j_lo), abs(j_hi))
    # the light cone plus margin must fit beyond the farthest observed site
    window = window_for(float(reach) + t, margin)
    buf = int(margin // 2)
    if j_lo < window.lo + buf or j_hi > window.hi - buf:
        raise WindowBreachError("requested range is inside the edge buffer")
    heights, j0s = _height_ensemble_kernel(
        base_seed, rep_offset, replicas, window.lo, window.hi,
        tp.rho_minus, tp.rho_plus, float(t), j_lo, j_hi)
    return heights, j0s
