"""Dictionary between two-sided TASEP height events and LPP passage events.

The exact correspondence P(h_t(N-M) >= N+M) = P(Ltilde(N,M) <= t) holds for
the padded boundary weights: geometric runs of zeros of length zeta_plus on
the bottom row (then Exp(1-rho_plus)) and zeta_minus on the left column
(then Exp(rho_minus)), unit bulk, zero origin.  The plain two-sided model
differs from the padded one by finitely many weights in expectation, so the
two share every nondegenerate fluctuation limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from . import lpp, tasep
from .params import BoundaryParams, GridShape, ParamError, StreamKey, TasepParams
from .rng import (
    STREAM_GEOM,
    STREAM_WEIGHTS,
    counter_exponential,
    counter_geometric,
    counter_uniform,
    stream_key,
)


@dataclass(frozen=True)
class PaddedBoundarySpec:
    """Boundary weights with geometric zero paddings.  Requires densities
    strictly inside (0, 1): at the endpoints the zero runs are almost
    surely infinite and the one-sided/zero-boundary routes apply."""

    rho_minus: float
    rho_plus: float

    def __post_init__(self):
        if not (0.0 < self.rho_plus < 1.0 and 0.0 < self.rho_minus < 1.0):
            raise ParamError("padded boundaries need rho_minus, rho_plus in (0, 1)")

    @property
    def mean_zeta_plus(self) -> float:
        return (1.0 - self.rho_plus) / self.rho_plus

    @property
    def mean_zeta_minus(self) -> float:
        return self.rho_minus / (1.0 - self.rho_minus)


def tasep_to_lpp_params(tp: TasepParams) -> BoundaryParams:
    """(pi, eta) = (1 - rho_plus, rho_minus); endpoint densities are routed
    to one-sided/zero-boundary specs instead."""
    if not (0.0 < tp.rho_plus < 1.0 and 0.0 < tp.rho_minus < 1.0):
        raise ParamError("endpoint densities map to one-sided/zero-boundary models")
    return BoundaryParams(pi=1.0 - tp.rho_plus, eta=tp.rho_minus)


def grid_from_height_event(j: int, level: int) -> GridShape:
    """Solve h(j) >= level for the LPP corner: N = (level+j)/2, M = (level-j)/2."""
    if (level + j) % 2 != 0:
        raise ParamError(f"level {level} + j {j} must be even (height parity)")
    if level <= abs(j):
        raise ParamError(f"level {level} must exceed |j| for a positive corner")
    return GridShape((level + j) // 2, (level - j) // 2)


@dataclass(frozen=True)
class CorrespondenceQuery:
    j: int
    level: int
    t: float

    def __post_init__(self):
        grid_from_height_event(self.j, self.level)
        if self.t < 0:
            raise ParamError("t must be nonnegative")

    @property
    def shape(self) -> GridShape:
        return grid_from_height_event(self.j, self.level)


def sample_padded_lpp(shape: GridShape, spec: PaddedBoundarySpec, key: StreamKey) -> float:
    """Last passage time under the padded weights (same DP engine; bulk
    weights share the unpadded model's realization site-for-site)."""
    l2, _, _ = lpp._run_padded(shape, spec.rho_minus, spec.rho_plus,
                               key.seed, key.replica, 1)
    return float(l2[0])


def padded_ensemble(shape: GridShape, spec: PaddedBoundarySpec,
                    base_seed: int, replicas: int) -> np.ndarray:
    if replicas < 1:
        raise ParamError("replicas must be >= 1")
    l2, _, _ = lpp._run_padded(shape, spec.rho_minus, spec.rho_plus,
                               base_seed, 0, replicas)
    return l2


@njit(parallel=True, cache=True)
def _padded_hits_kernel(seed, reps, n, m, rho_minus, rho_plus, t):
    """Indicator of {Ltilde(N, M) <= t} for all 1 <= N <= n, 1 <= M <= m."""
    hits = np.zeros((reps, n, m), np.uint8)
    q_row = 1.0 - rho_plus
    q_col = rho_minus
    for r in prange(reps):
        wkey = stream_key(seed, r, STREAM_WEIGHTS)
        gkey = stream_key(seed, r, STREAM_GEOM)
        zr = counter_geometric(gkey, 0, q_row) + 1
        zc = counter_geometric(gkey, 1, q_col) + 1
        v = np.empty(n + 1)
        acc = 0.0
        for i in range(n + 1):
            if i >= zr:
                acc += counter_exponential(wkey, i * (m + 1), q_row)
            v[i] = acc
        for j in range(1, m + 1):
            w0 = 0.0 if j < zc else counter_exponential(wkey, j, q_col)
            v[0] = v[0] + w0
            for i in range(1, n + 1):
                w = -np.log1p(-counter_uniform(wkey, i * (m + 1) + j))
                up, left = v[i], v[i - 1]
                v[i] = w + (up if up > left else left)
                hits[r, i - 1, j - 1] = 1 if v[i] <= t else 0
    return hits


@dataclass(frozen=True)
class CorrespondenceResult:
    p_height: float
    se_height: float
    p_lpp: float
    se_lpp: float

    @property
    def combined_se(self) -> float:
        return math.sqrt(self.se_height ** 2 + self.se_lpp ** 2)

    @property
    def gap(self) -> float:
        return abs(self.p_height - self.p_lpp)


def _proportion(hits: np.ndarray) -> tuple[float, float]:
    n = hits.shape[0]
    p = float(hits.mean())
    return p, math.sqrt(p * (1.0 - p) / n)


def check_correspondence(tp: TasepParams, q: CorrespondenceQuery,
                         replicas: int, base_seed: int) -> CorrespondenceResult:
    """Estimate both sides of the height/passage identity with independent
    ensembles (the two models draw from disjoint randomness streams)."""
    spec = PaddedBoundarySpec(tp.rho_minus, tp.rho_plus)
    shape = q.shape
    heights, _ = tasep.height_ensemble(tp, q.t, q.j, q.j, base_seed, replicas)
    p_h, se_h = _proportion(heights[:, 0] >= q.level)
    l2 = padded_ensemble(shape, spec, base_seed, replicas)
    p_l, se_l = _proportion(l2 <= q.t)
    return CorrespondenceResult(p_h, se_h, p_l, se_l)


def correspondence_grid(tp: TasepParams, t: float, max_sum: int,
                        replicas: int, base_seed: int):
    """All queries (N, M) with N, M >= 1 and N + M <= max_sum, estimated
    from one TASEP ensemble and one padded-LPP ensemble.  Yields
    (shape, CorrespondenceResult) pairs."""
    spec = PaddedBoundarySpec(tp.rho_minus, tp.rho_plus)
    j_max = max_sum - 2
    heights, _ = tasep.height_ensemble(tp, t, -j_max, j_max, base_seed, replicas)
    dim = max_sum - 1
    hits = _padded_hits_kernel(base_seed, replicas, dim, dim,
                               tp.rho_minus, tp.rho_plus, float(t))
    out = []
    for n in range(1, max_sum):
        for m in range(1, max_sum - n + 1):
            j = n - m
            level = n + m
            p_h, se_h = _proportion(heights[:, j + j_max] >= level)
            p_l, se_l = _proportion(hits[:, n - 1, m - 1])
            out.append((GridShape(n, m), CorrespondenceResult(p_h, se_h, p_l, se_l)))
    return out


# --------------------------------------------------------------------------
# endpoint-density routes
# --------------------------------------------------------------------------

def lpp_spec_for_densities(tp: TasepParams):
    """Route densities to the matching LPP weight spec.  Interior densities
    give the padded two-sided model; endpoint densities degenerate (the
    geometric zero runs become infinite) into zero-boundary or one-sided
    layouts.  Returns (spec, transpose) where transpose marks that the
    grid roles (N, M) must be swapped."""
    rm, rp = tp.rho_minus, tp.rho_plus
    interior_m = 0.0 < rm < 1.0
    interior_p = 0.0 < rp < 1.0
    if interior_m and interior_p:
        return PaddedBoundarySpec(rm, rp), False
    if rm >= 1.0 and rp <= 0.0:
        return lpp.ZeroBoundary(), False
    if rm >= 1.0 and interior_p:
        # infinite zero column; bottom row keeps rate 1 - rho_plus
        return lpp.OneSided(1.0 - rp), True
    if rp <= 0.0 and interior_m:
        # infinite zero row; left column keeps rate rho_minus
        return lpp.OneSided(rm), False
    raise ParamError("degenerate density pair has no growing corner")


@njit(cache=True)
def _cantor(i, j):
    s = i + j
    return s * (s + 1) // 2 + j


@njit(cache=True)
def _growth_height_kernel(seed, replica, t, j_plus, j_minus, k_max,
                          row_rate, col_rate):
    """Height of the LPP growth interface over site j at time t: the
    largest 2k + |j| with L(k + j_plus, k + j_minus) <= t.  Boundary rates
    <= 0 mean zero weights (the step-initial-condition layout)."""
    wkey = stream_key(seed, replica, STREAM_WEIGHTS)
    n = k_max + j_plus
    v = np.zeros(n + 1)
    if row_rate > 0.0:
        acc = 0.0
        for i in range(1, n + 1):
            acc += counter_exponential(wkey, _cantor(i, 0), row_rate)
            v[i] = acc
    k_star = 0
    for row in range(1, k_max + j_minus + 1):
        if col_rate > 0.0:
            v[0] += counter_exponential(wkey, _cantor(0, row), col_rate)
        for i in range(1, n + 1):
            w = -np.log1p(-counter_uniform(wkey, _cantor(i, row)))
            up, left = v[i], v[i - 1]
            v[i] = w + (up if up > left else left)
        if row > j_minus:
            k = row - j_minus
            if v[k + j_plus] <= t:
                k_star = k
            else:
                break
    return 2 * k_star + j_plus + j_minus


def _k_max_for(t: float, j: int) -> int:
    jp, jm = max(j, 0), max(-j, 0)
    k = 0
    while (math.sqrt(k + jp + 1) + math.sqrt(k + jm + 1)) ** 2 <= t:
        k += 1
    return k + int(6.0 * t ** (1.0 / 3.0)) + 8


def step_height_via_lpp(t: float, j: int, key: StreamKey) -> int:
    """h_t(j) for step initial data, sampled through the zero-boundary
    growth mapping rather than particle dynamics."""
    if t < 0:
        raise ParamError("t must be nonnegative")
    jp, jm = max(j, 0), max(-j, 0)
    k_max = _k_max_for(t, j)
    return int(_growth_height_kernel(key.seed, key.replica, float(t), jp, jm,
                                     k_max, 0.0, 0.0))


@njit(parallel=True, cache=True)
def _growth_height_ensemble_kernel(seed, reps, t, j_plus, j_minus, k_max,
                                   row_rate, col_rate):
    out = np.empty(reps, np.int64)
    for r in prange(reps):
        out[r] = _growth_height_kernel(seed, r, t, j_plus, j_minus, k_max,
                                       row_rate, col_rate)
    return out


def step_height_ensemble(t: float, j: int, base_seed: int, replicas: int) -> np.ndarray:
    if replicas < 1:
        raise ParamError("replicas must be >= 1")
    jp, jm = max(j, 0), max(-j, 0)
    k_max = _k_max_for(t, j)
    return _growth_height_ensemble_kernel(base_seed, replicas, float(t), jp, jm,
                                          k_max, 0.0, 0.0)


def twosided_growth_height_ensemble(pi: float, eta: float, t: float, j: int,
                                    base_seed: int, replicas: int) -> np.ndarray:
    """Growth-interface heights over site j for the two-sided boundary
    model (Exp(pi) bottom row, Exp(eta) left column); the LPP-side analog
    of the TASEP height ensemble, on the same even lattice."""
    if replicas < 1:
        raise ParamError("replicas must be >= 1")
    BoundaryParams(pi, eta)
    jp, jm = max(j, 0), max(-j, 0)
    k_max = _k_max_for(t, j)
    return _growth_height_ensemble_kernel(base_seed, replicas, float(t), jp, jm,
                                          k_max, pi, eta)
