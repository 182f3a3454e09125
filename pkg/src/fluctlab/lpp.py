"""Seeded weight generation and the last-passage dynamic program.

A last passage grid has sites (i, j), 0 <= i <= N, 0 <= j <= M; paths move
+1 in i or +1 in j.  Every weight is a pure function of
(seed, replica, site index), so the couplings (divide-by-mean, pinning,
finite perturbations) all act on the same realization by construction, and
ensembles are bit-identical for any parallelism degree.

The branch decomposition tracks two value fields in one pass: x_branch is
the best path forced through the bottom edge of the zero block (first step
right in the single-width case), y_branch through the left edge.  The
rolling front keeps one row of length min(N, M) + 1; when N > M the grid
is computed transposed with the boundary roles swapped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .params import AspectRatio, BoundaryParams, GridShape, ParamError, StreamKey
from .rng import (
    STREAM_GEOM,
    STREAM_WEIGHTS,
    counter_exponential,
    counter_geometric,
    counter_uniform,
    stream_key,
)

_NEG = -1.0e300

_KIND_SIMPLE = 0
_KIND_THICK = 1

_EDGE_BOTTOM = 0
_EDGE_LEFT = 1

_EMPTY_I = np.empty(0, dtype=np.int64)
_EMPTY_F = np.empty(0, dtype=np.float64)


# --------------------------------------------------------------------------
# weight specifications
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoSided:
    """Exp(pi) bottom row, Exp(eta) left column, unit bulk, zero origin.
    ``perturbations`` is a tuple of (i, j, delta) additive weight changes,
    the finite-perturbation toggle used by robustness checks."""

    pi: float
    eta: float
    perturbations: tuple = ()

    def __post_init__(self):
        BoundaryParams(self.pi, self.eta)


@dataclass(frozen=True)
class OneSided:
    """Exp(eta) left column, zero bottom row, unit bulk."""

    eta: float

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ParamError(f"eta must be in (0, 1], got {self.eta}")


@dataclass(frozen=True)
class ZeroBoundary:
    """Zero weights on both boundary lines, unit bulk."""


@dataclass(frozen=True)
class Thick:
    """Boundary of J bottom rows and I left columns.  Row j < J carries rate
    pi_rates[j] + x_shifts[j] / M**(1/3); column i < I carries
    eta_rates[i] + y_shifts[i] / M**(1/3); the I-by-J corner block and the
    origin are zero; the rest is unit bulk."""

    pi_rates: tuple = ()
    eta_rates: tuple = ()
    x_shifts: tuple = ()
    y_shifts: tuple = ()

    def __post_init__(self):
        if len(self.x_shifts) != len(self.pi_rates) or len(self.y_shifts) != len(self.eta_rates):
            raise ParamError("shift vectors must match rate vectors in length")
        if len(self.pi_rates) + len(self.eta_rates) < 1:
            raise ParamError("thick boundary needs J + I >= 1")

    @property
    def rows(self) -> int:
        return len(self.pi_rates)

    @property
    def cols(self) -> int:
        return len(self.eta_rates)

    def effective_rates(self, shape: GridShape) -> tuple[np.ndarray, np.ndarray]:
        scale = float(shape.n_rows) ** (1.0 / 3.0)
        row = np.asarray(self.pi_rates, dtype=np.float64) + np.asarray(self.x_shifts, dtype=np.float64) / scale
        col = np.asarray(self.eta_rates, dtype=np.float64) + np.asarray(self.y_shifts, dtype=np.float64) / scale
        if (row <= 0.0).any() or (col <= 0.0).any():
            raise ParamError("perturbed boundary rates must stay positive for this shape")
        return row, col


@dataclass(frozen=True, eq=False)
class Explicit:
    """A full (N+1) x (M+1) matrix of nonnegative weights, indexed [i, j]."""

    weights: np.ndarray
    perturbations: tuple = ()

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2:
            raise ParamError("explicit weights must be a 2-d matrix")
        if (w < 0.0).any():
            raise ParamError("explicit weights must be nonnegative")
        object.__setattr__(self, "weights", w)


WeightSpec = TwoSided | OneSided | ZeroBoundary | Thick | Explicit


@dataclass(frozen=True)
class LppOutcome:
    """One replica's passage times: l2 = max(x_branch, y_branch) exactly."""

    l2: float
    x_branch: float
    y_branch: float


@dataclass(frozen=True)
class CoupledPair:
    original: LppOutcome
    tilded: LppOutcome


@dataclass
class EnsembleResult:
    """Column arrays over replicas, ordered by replica index."""

    l2: np.ndarray
    x_branch: np.ndarray
    y_branch: np.ndarray

    def __len__(self):
        return len(self.l2)


# --------------------------------------------------------------------------
# kernels
# --------------------------------------------------------------------------

@njit(inline="always", cache=True)
def _weight(kind, i, j, n, m, wkey, ct_i, ct_j,
            z_row, z_col, row_rate, col_rate,
            big_i, big_j, row_rates, col_rates):
    if kind == _KIND_SIMPLE:
        if j == 0:
            if i < z_row:
                return 0.0
            rate = row_rate
        elif i == 0:
            if j < z_col:
                return 0.0
            rate = col_rate
        else:
            rate = 1.0
    else:  # thick
        if i == 0 and j == 0:
            return 0.0
        if i < big_i and j < big_j:
            return 0.0
        if j < big_j:
            rate = row_rates[j]
        elif i < big_i:
            rate = col_rates[i]
        else:
            rate = 1.0
    cnt = i * ct_i + j * ct_j
    return counter_exponential(wkey, cnt, rate)


@njit(cache=True)
def _pair_dp_simple(n, m, wkey, ct_i, ct_j,
                    z_row, z_col, row_rate, col_rate,
                    pert_i, pert_j, pert_d):
    """Branch decomposition for the single-width boundary layouts
    (two-sided / one-sided / zero / padded).  The only forbidden cells are
    (1, 0) for y_branch and (0, 1) for x_branch; the sentinel propagates by
    absorption.  The bulk inner loop is kept branch-light."""
    xv = np.empty(n + 1)
    yv = np.empty(n + 1)
    npert = pert_i.shape[0]
    w00 = 0.0
    if npert > 0:
        for k in range(npert):
            if pert_i[k] == 0 and pert_j[k] == 0:
                w00 += pert_d[k]
    xv[0] = w00
    yv[0] = w00
    for i in range(1, n + 1):
        w = 0.0 if i < z_row else counter_exponential(wkey, i * ct_i, row_rate)
        if npert > 0:
            for k in range(npert):
                if pert_i[k] == i and pert_j[k] == 0:
                    w += pert_d[k]
        xv[i] = xv[i - 1] + w
        yv[i] = _NEG
    for j in range(1, m + 1):
        base = j * ct_j
        w0 = 0.0 if j < z_col else counter_exponential(wkey, base, col_rate)
        if npert > 0:
            for k in range(npert):
                if pert_i[k] == 0 and pert_j[k] == j:
                    w0 += pert_d[k]
        xv[0] = _NEG if j == 1 else xv[0] + w0
        yv[0] = yv[0] + w0
        pert_row = False
        if npert > 0:
            for k in range(npert):
                if pert_j[k] == j and pert_i[k] > 0:
                    pert_row = True
        if pert_row:
            for i in range(1, n + 1):
                w = -np.log1p(-counter_uniform(wkey, i * ct_i + base))
                for k in range(npert):
                    if pert_i[k] == i and pert_j[k] == j:
                        w += pert_d[k]
                ux, lx = xv[i], xv[i - 1]
                xv[i] = w + (ux if ux > lx else lx)
                uy, ly = yv[i], yv[i - 1]
                yv[i] = w + (uy if uy > ly else ly)
        else:
            for i in range(1, n + 1):
                w = -np.log1p(-counter_uniform(wkey, i * ct_i + base))
                ux, lx = xv[i], xv[i - 1]
                xv[i] = w + (ux if ux > lx else lx)
                uy, ly = yv[i], yv[i - 1]
                yv[i] = w + (uy if uy > ly else ly)
    x = xv[n]
    y = yv[n]
    return (x if x > y else y), x, y


@njit(cache=True)
def _pair_dp(n, m, wkey, ct_i, ct_j, kind,
             z_row, z_col, row_rate, col_rate,
             big_i, big_j, row_rates, col_rates,
             pert_i, pert_j, pert_d):
    """One grid, both branch fields.  Returns (l2, x_branch, y_branch)."""
    if kind == _KIND_SIMPLE:
        return _pair_dp_simple(n, m, wkey, ct_i, ct_j,
                               z_row, z_col, row_rate, col_rate,
                               pert_i, pert_j, pert_d)
    xv = np.empty(n + 1)
    yv = np.empty(n + 1)
    for j in range(m + 1):
        for i in range(n + 1):
            w = _weight(kind, i, j, n, m, wkey, ct_i, ct_j,
                        z_row, z_col, row_rate, col_rate,
                        big_i, big_j, row_rates, col_rates)
            if j == 0:
                if i == 0:
                    xv[0] = w
                    yv[0] = w
                else:
                    xv[i] = xv[i - 1] + w
                    yv[i] = _NEG if (i == big_i and 0 < big_j) else yv[i - 1] + w
            else:
                if i == 0:
                    xb = _NEG if (j == big_j and 0 < big_i) else xv[0] + w
                    yb = yv[0] + w
                    xv[0] = xb
                    yv[0] = yb
                else:
                    up_x, left_x = xv[i], xv[i - 1]
                    up_y, left_y = yv[i], yv[i - 1]
                    xb = w + (up_x if up_x > left_x else left_x)
                    yb = w + (up_y if up_y > left_y else left_y)
                    if j == big_j and i < big_i:
                        xb = _NEG
                    if i == big_i and j < big_j:
                        yb = _NEG
                    xv[i] = xb
                    yv[i] = yb
    x = xv[n]
    y = yv[n]
    return (x if x > y else y), x, y


@njit(cache=True)
def _pinned_dp(n, m, wkey, ct_i, ct_j, kind,
               z_row, z_col, row_rate, col_rate,
               big_i, big_j, row_rates, col_rates,
               pin_edge, pin_len):
    """Best path forced along the chosen edge through site index pin_len,
    free afterwards.  pin_edge 0 pins the bottom row, 1 the left column."""
    v = np.empty(n + 1)
    for j in range(m + 1):
        for i in range(n + 1):
            w = _weight(kind, i, j, n, m, wkey, ct_i, ct_j,
                        z_row, z_col, row_rate, col_rate,
                        big_i, big_j, row_rates, col_rates)
            if j == 0:
                if i == 0:
                    v[0] = w
                elif pin_edge == _EDGE_LEFT and pin_len > 0:
                    v[i] = _NEG
                else:
                    v[i] = v[i - 1] + w
            elif pin_edge == _EDGE_BOTTOM and i < pin_len:
                v[i] = _NEG
            elif pin_edge == _EDGE_LEFT and j < pin_len and i >= 1:
                v[i] = _NEG
            elif i == 0:
                v[0] = v[0] + w
            else:
                up, left = v[i], v[i - 1]
                v[i] = w + (up if up > left else left)
    return v[n]


@njit(parallel=True, cache=True)
def _ensemble_kernel(n, m, seed, rep_offset, reps, transposed,
                     kind, z_row, z_col, row_rate, col_rate,
                     geom_q_row, geom_q_col,
                     big_i, big_j, row_rates, col_rates,
                     pert_i, pert_j, pert_d):
    l2 = np.empty(reps)
    xb = np.empty(reps)
    yb = np.empty(reps)
    # canonical site counter is i*(M+1)+j in ORIGINAL coordinates; under
    # transposition the loop's (i, j) are the original (j, i)
    ct_i = 1 if transposed else m + 1
    ct_j = (n + 1) if transposed else 1
    for r in prange(reps):
        replica = rep_offset + r
        wkey = stream_key(seed, replica, STREAM_WEIGHTS)
        zr, zc = z_row, z_col
        if geom_q_row > 0.0 or geom_q_col > 0.0:
            gkey = stream_key(seed, replica, STREAM_GEOM)
            # geometric counters are tied to the original orientation
            if geom_q_row > 0.0:
                zr = counter_geometric(gkey, 1 if transposed else 0, geom_q_row) + 1
            if geom_q_col > 0.0:
                zc = counter_geometric(gkey, 0 if transposed else 1, geom_q_col) + 1
        t2, tx, ty = _pair_dp(n, m, wkey, ct_i, ct_j, kind,
                              zr, zc, row_rate, col_rate,
                              big_i, big_j, row_rates, col_rates,
                              pert_i, pert_j, pert_d)
        l2[r] = t2
        xb[r] = tx
        yb[r] = ty
    return l2, xb, yb


@njit(cache=True)
def _explicit_pair_dp(weights, big_i, big_j):
    n = weights.shape[0] - 1
    m = weights.shape[1] - 1
    xv = np.empty(n + 1)
    yv = np.empty(n + 1)
    for j in range(m + 1):
        for i in range(n + 1):
            w = weights[i, j]
            if j == 0:
                if i == 0:
                    xv[0] = w
                    yv[0] = w
                else:
                    xv[i] = xv[i - 1] + w
                    yv[i] = _NEG if i == big_i else yv[i - 1] + w
            else:
                if i == 0:
                    xv[0] = _NEG if j == big_j else xv[0] + w
                    yv[0] = yv[0] + w
                else:
                    up_x, left_x = xv[i], xv[i - 1]
                    up_y, left_y = yv[i], yv[i - 1]
                    xb = w + (up_x if up_x > left_x else left_x)
                    yb = w + (up_y if up_y > left_y else left_y)
                    if j == big_j and i < big_i:
                        xb = _NEG
                    if i == big_i and j < big_j:
                        yb = _NEG
                    xv[i] = xb
                    yv[i] = yb
    x = xv[n]
    y = yv[n]
    return (x if x > y else y), x, y


# --------------------------------------------------------------------------
# spec packing
# --------------------------------------------------------------------------

def _pack(shape: GridShape, spec: WeightSpec):
    """Kernel parameters for a spec on a shape, in original orientation."""
    n, m = shape.n_cols, shape.n_rows
    if isinstance(spec, TwoSided):
        return dict(kind=_KIND_SIMPLE, z_row=1, z_col=1, row_rate=spec.pi, col_rate=spec.eta,
                    geom_q_row=-1.0, geom_q_col=-1.0, big_i=1, big_j=1,
                    row_rates=_EMPTY_F, col_rates=_EMPTY_F, pert=spec.perturbations)
    if isinstance(spec, OneSided):
        return dict(kind=_KIND_SIMPLE, z_row=n + 1, z_col=1, row_rate=1.0, col_rate=spec.eta,
                    geom_q_row=-1.0, geom_q_col=-1.0, big_i=1, big_j=1,
                    row_rates=_EMPTY_F, col_rates=_EMPTY_F, pert=())
    if isinstance(spec, ZeroBoundary):
        return dict(kind=_KIND_SIMPLE, z_row=n + 1, z_col=m + 1, row_rate=1.0, col_rate=1.0,
                    geom_q_row=-1.0, geom_q_col=-1.0, big_i=1, big_j=1,
                    row_rates=_EMPTY_F, col_rates=_EMPTY_F, pert=())
    if isinstance(spec, Thick):
        row, col = spec.effective_rates(shape)
        if spec.rows > m or spec.cols > n:
            raise ParamError("shape too small for the thick boundary block")
        return dict(kind=_KIND_THICK, z_row=0, z_col=0, row_rate=1.0, col_rate=1.0,
                    geom_q_row=-1.0, geom_q_col=-1.0,
                    big_i=spec.cols, big_j=spec.rows,
                    row_rates=row, col_rates=col, pert=())
    raise ParamError(f"unsupported weight spec {type(spec).__name__}")


def _pert_arrays(pert):
    if not pert:
        return _EMPTY_I, _EMPTY_I, _EMPTY_F
    pi = np.array([p[0] for p in pert], dtype=np.int64)
    pj = np.array([p[1] for p in pert], dtype=np.int64)
    pd = np.array([p[2] for p in pert], dtype=np.float64)
    return pi, pj, pd


def _run(shape: GridShape, spec: WeightSpec, seed: int, rep_offset: int, reps: int):
    n, m = shape.n_cols, shape.n_rows
    p = _pack(shape, spec)
    pi, pj, pd = _pert_arrays(p.pop("pert"))
    transposed = n > m
    if transposed:
        n, m = m, n
        p["z_row"], p["z_col"] = p["z_col"], p["z_row"]
        p["row_rate"], p["col_rate"] = p["col_rate"], p["row_rate"]
        p["geom_q_row"], p["geom_q_col"] = p["geom_q_col"], p["geom_q_row"]
        p["big_i"], p["big_j"] = p["big_j"], p["big_i"]
        p["row_rates"], p["col_rates"] = p["col_rates"], p["row_rates"]
        pi, pj = pj, pi
    l2, xb, yb = _ensemble_kernel(
        n, m, seed, rep_offset, reps, transposed,
        p["kind"], p["z_row"], p["z_col"], p["row_rate"], p["col_rate"],
        p["geom_q_row"], p["geom_q_col"], p["big_i"], p["big_j"],
        p["row_rates"], p["col_rates"], pi, pj, pd)
    if transposed:
        xb, yb = yb, xb
    return l2, xb, yb


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------

def _run_padded(shape: GridShape, rho_minus: float, rho_plus: float,
                seed: int, rep_offset: int, reps: int):
    """Ensemble under geometrically padded boundaries: zero runs of length
    zeta_plus / zeta_minus on the bottom row / left column, then
    Exp(1-rho_plus) / Exp(rho_minus) weights, unit bulk.  Bulk weights share
    the canonical site counters, so realizations match the unpadded model."""
    n, m = shape.n_cols, shape.n_rows
    transposed = n > m
    q_row, q_col = 1.0 - rho_plus, rho_minus
    row_rate, col_rate = 1.0 - rho_plus, rho_minus
    if transposed:
        n, m = m, n
        q_row, q_col = q_col, q_row
        row_rate, col_rate = col_rate, row_rate
    l2, xb, yb = _ensemble_kernel(
        n, m, seed, rep_offset, reps, transposed,
        _KIND_SIMPLE, 1, 1, row_rate, col_rate,
        q_row, q_col, 1, 1, _EMPTY_F, _EMPTY_F,
        _EMPTY_I, _EMPTY_I, _EMPTY_F)
    if transposed:
        xb, yb = yb, xb
    return l2, xb, yb


def sample_last_passage(shape: GridShape, spec: WeightSpec, key: StreamKey) -> LppOutcome:
    """Passage time and both branch values for one replica."""
    if isinstance(spec, Explicit):
        w = spec.weights.copy()
        for (i, j, d) in spec.perturbations:
            w[i, j] += d
        if w.shape != (shape.n_cols + 1, shape.n_rows + 1):
            raise ParamError("explicit weight matrix does not match the shape")
        l2, x, y = _explicit_pair_dp(w, 1, 1)
        return LppOutcome(l2, x, y)
    l2, x, y = _run(shape, spec, key.seed, key.replica, 1)
    return LppOutcome(float(l2[0]), float(x[0]), float(y[0]))


def run_ensemble(shape: GridShape, spec: WeightSpec, base_seed: int, replicas: int) -> EnsembleResult:
    """Replica r uses StreamKey(base_seed, r); output is ordered by replica
    index and bit-identical for any thread count."""
    if replicas < 1:
        raise ParamError("replicas must be >= 1")
    if isinstance(spec, Explicit):
        raise ParamError("ensembles over explicit weights are not meaningful")
    l2, x, y = _run(shape, spec, base_seed, 0, replicas)
    return EnsembleResult(l2, x, y)


def couple_divide_by_mean(shape: GridShape, spec: TwoSided, key: StreamKey) -> CoupledPair:
    """Original two-sided outcome coupled with the same realization after
    dividing each boundary weight by its mean (an Exp(rate) sample scaled
    by its rate is an Exp(1) sample), sharing all bulk weights."""
    if not isinstance(spec, TwoSided):
        raise ParamError("coupling is defined for two-sided boundary specs")
    if spec.perturbations:
        raise ParamError("coupling a perturbed spec is not supported")
    original = sample_last_passage(shape, spec, key)
    tilded = sample_last_passage(shape, TwoSided(1.0, 1.0), key)
    return CoupledPair(original, tilded)


def paper_pin_fraction(p: BoundaryParams, g: AspectRatio, edge: str) -> float:
    """The pinning fraction used in the order-1/2 coupling construction."""
    if edge == "BOTTOM":
        val = 1.0 - g.gamma2 / (1.0 / p.pi - 1.0) ** 2
    elif edge == "LEFT":
        val = 1.0 - (1.0 / g.gamma2) / (1.0 / p.eta - 1.0) ** 2
    else:
        raise ParamError(f"edge must be BOTTOM or LEFT, got {edge!r}")
    if not 0.0 <= val <= 1.0:
        raise ParamError(f"pin fraction {val} outside [0, 1]; rate not subcritical")
    return val


def pinned_passage_time(shape: GridShape, spec: WeightSpec, key: StreamKey,
                        edge: str, pin_fraction: float) -> float:
    """Maximal weight over paths forced along the chosen edge up to
    floor(pin_fraction * N) (resp. M), free afterwards; computed on the
    same realization as sample_last_passage."""
    if not 0.0 <= pin_fraction <= 1.0:
        raise ParamError(f"pin_fraction must be in [0, 1], got {pin_fraction}")
    if edge not in ("BOTTOM", "LEFT"):
        raise ParamError(f"edge must be BOTTOM or LEFT, got {edge!r}")
    if isinstance(spec, Explicit):
        raise ParamError("pinning explicit weights is not supported")
    n, m = shape.n_cols, shape.n_rows
    p = _pack(shape, spec)
    p.pop("pert")
    if p["geom_q_row"] > 0 or p["geom_q_col"] > 0:
        raise ParamError("pinning padded specs is not supported")
    wkey = np.uint64(stream_key(key.seed, key.replica, STREAM_WEIGHTS))
    pin_edge = _EDGE_BOTTOM if edge == "BOTTOM" else _EDGE_LEFT
    pin_len = int(pin_fraction * (n if edge == "BOTTOM" else m))
    val = _pinned_dp(n, m, wkey, m + 1, 1, p["kind"],
                     p["z_row"], p["z_col"], p["row_rate"], p["col_rate"],
                     p["big_i"], p["big_j"], p["row_rates"], p["col_rates"],
                     pin_edge, pin_len)
    return float(val)


@njit(parallel=True, cache=True)
def _pinned_ensemble_kernel(n, m, seed, reps, kind,
                            z_row, z_col, row_rate, col_rate,
                            big_i, big_j, row_rates, col_rates,
                            pin_edge, pin_len):
    out = np.empty(reps)
    for r in prange(reps):
        wkey = stream_key(seed, r, STREAM_WEIGHTS)
        out[r] = _pinned_dp(n, m, wkey, m + 1, 1, kind,
                            z_row, z_col, row_rate, col_rate,
                            big_i, big_j, row_rates, col_rates,
                            pin_edge, pin_len)
    return out


def pinned_ensemble(shape: GridShape, spec: WeightSpec, base_seed: int, replicas: int,
                    edge: str, pin_fraction: float) -> np.ndarray:
    """pinned_passage_time over an ensemble, replica-indexed like run_ensemble."""
    if replicas < 1:
        raise ParamError("replicas must be >= 1")
    if not 0.0 <= pin_fraction <= 1.0:
        raise ParamError(f"pin_fraction must be in [0, 1], got {pin_fraction}")
    if edge not in ("BOTTOM", "LEFT"):
        raise ParamError(f"edge must be BOTTOM or LEFT, got {edge!r}")
    n, m = shape.n_cols, shape.n_rows
    p = _pack(shape, spec)
    p.pop("pert")
    pin_edge = _EDGE_BOTTOM if edge == "BOTTOM" else _EDGE_LEFT
    pin_len = int(pin_fraction * (n if edge == "BOTTOM" else m))
    return _pinned_ensemble_kernel(n, m, base_seed, replicas, p["kind"],
                                   p["z_row"], p["z_col"], p["row_rate"], p["col_rate"],
                                   p["big_i"], p["big_j"], p["row_rates"], p["col_rates"],
                                   pin_edge, pin_len)


def thick_boundary_sample(shape: GridShape, spec: Thick, key: StreamKey) -> LppOutcome:
    """Two-sided passage with a thick boundary; x_branch/y_branch are the
    passage times forced through the bottom/left edge of the zero block."""
    if not isinstance(spec, Thick):
        raise ParamError("thick_boundary_sample requires a Thick spec")
    return sample_last_passage(shape, spec, key)


def brute_force_last_passage(shape, weights) -> LppOutcome:
    """Exact maxima by enumerating every monotone path; the independent
    oracle for the dynamic program.  Requires N + M <= 12."""
    if isinstance(shape, GridShape):
        n, m = shape.n_cols, shape.n_rows
    else:
        n, m = shape
    if n + m > 12:
        raise ParamError("brute force restricted to N + M <= 12")
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n + 1, m + 1):
        raise ParamError("weight matrix does not match the shape")
    if n == 0 and m == 0:
        v = float(w[0, 0])
        return LppOutcome(v, v, v)
    best = best_x = best_y = -np.inf
    for rights in itertools.combinations(range(n + m), n):
        ri = set(rights)
        i = j = 0
        total = w[0, 0]
        for step in range(n + m):
            if step in ri:
                i += 1
            else:
                j += 1
            total += w[i, j]
        best = max(best, total)
        first_right = (0 in ri) if n > 0 else False
        if n > 0 and first_right:
            best_x = max(best_x, total)
        if m > 0 and not first_right:
            best_y = max(best_y, total)
    if n == 0:
        best_x = best
    if m == 0:
        best_y = best
    return LppOutcome(best, best_x, best_y)
