"""Exact regime classification, centering/scaling constants, hydrodynamic
profiles, and the observer <-> grid changes of variables.

Everything here is a pure function of its inputs; no randomness.
Equality comparisons against regime boundaries use an absolute tolerance
(boundaries are measure-zero and exact rationals are common inputs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import (
    AspectRatio,
    BoundaryParams,
    GridShape,
    LimitLaw,
    Observation,
    ParamError,
    Regime,
    ScalingLaw,
    TasepParams,
)

#: absolute tolerance for landing on a regime boundary
BOUNDARY_TOL = 1e-9

THIRD = 1.0 / 3.0


class Unsupported:
    """Marker for (density, speed) combinations outside the proven Gaussian
    region; an explicit return value, not an error."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNSUPPORTED"

    def __bool__(self):
        return False


UNSUPPORTED = Unsupported()


def g2_curve_eta(pi: float, g: AspectRatio) -> float:
    """Left-column rate eta on the coincident-leading-order (G^2) curve for
    a given bottom-row rate pi < 1/(1+gamma)."""
    if not (0.0 < pi < 1.0 / (1.0 + g.gamma) + BOUNDARY_TOL):
        raise ParamError(f"pi={pi} is outside the Gaussian region for gamma={g.gamma}")
    return _g2_eta_raw(pi, g.gamma)


def _g2_eta_raw(pi: float, gamma: float) -> float:
    ginv2 = 1.0 / (gamma * gamma)
    return pi / (pi * (1.0 - ginv2) + ginv2)


def classify_lpp_regime(p: BoundaryParams, g: AspectRatio) -> Regime:
    """Partition (pi, eta, gamma) by fluctuation order and limit law."""
    gamma = g.gamma
    pi_c = 1.0 / (1.0 + gamma)
    eta_c = gamma / (1.0 + gamma)
    pi_crit = abs(p.pi - pi_c) <= BOUNDARY_TOL
    eta_crit = abs(p.eta - eta_c) <= BOUNDARY_TOL

    if pi_crit and eta_crit:
        return Regime.CRITICAL_F11
    if pi_crit and p.eta > eta_c:
        return Regime.GOE2_PI
    if eta_crit and p.pi > pi_c:
        return Regime.GOE2_ETA
    if p.pi > pi_c and p.eta > eta_c:
        return Regime.GUE

    # at least one rate strictly subcritical: order-1/2 territory, split by
    # which leading term wins (equality is the G^2 line)
    eta_on_curve = _g2_eta_raw(p.pi, gamma)
    if abs(p.eta - eta_on_curve) <= BOUNDARY_TOL and p.pi < pi_c:
        return Regime.G_SQUARED
    if p.pi < pi_c and p.eta > eta_on_curve:
        return Regime.GAUSS_PI
    return Regime.GAUSS_ETA


def boundary_flags(p: BoundaryParams, g: AspectRatio) -> set[str]:
    """Which regime boundaries (if any) the point sits on, within tolerance.
    Diagnostic companion to classify_lpp_regime; used for band flagging."""
    flags = set()
    gamma = g.gamma
    pi_c = 1.0 / (1.0 + gamma)
    if abs(p.pi - pi_c) <= BOUNDARY_TOL:
        flags.add("pi_critical")
    if abs(p.eta - gamma / (1.0 + gamma)) <= BOUNDARY_TOL:
        flags.add("eta_critical")
    if p.pi <= pi_c + BOUNDARY_TOL and abs(p.eta - _g2_eta_raw(p.pi, gamma)) <= BOUNDARY_TOL:
        flags.add("g2_curve")
    return flags


def _gauss_center_coeff(rate: float, gamma2: float) -> float:
    inv = 1.0 / rate
    return inv + inv * gamma2 / (inv - 1.0)


def _gauss_scale_coeff(rate: float, gamma2: float) -> float:
    inv = 1.0 / rate
    var = inv * inv - inv * inv * gamma2 / (inv - 1.0) ** 2
    if var <= 0.0:
        raise ParamError(f"Gaussian variance expression nonpositive at rate={rate}")
    return math.sqrt(var)


def gaussian_variance_coeff(rate: float, gamma2: float) -> float:
    """The order-1/2 variance expression; strictly positive exactly on the
    subcritical side, vanishing at criticality."""
    inv = 1.0 / rate
    return inv * inv - inv * inv * gamma2 / (inv - 1.0) ** 2


def lpp_scaling_law(p: BoundaryParams, g: AspectRatio) -> ScalingLaw:
    """Exact centering, scale, and limit law for the classified regime."""
    regime = classify_lpp_regime(p, g)
    gamma = g.gamma
    gamma2 = gamma * gamma

    if regime in (Regime.GUE, Regime.GOE2_PI, Regime.GOE2_ETA, Regime.CRITICAL_F11):
        tag = {"GUE": "F0", "GOE2_PI": "F1", "GOE2_ETA": "F1", "CRITICAL_F11": "F11"}[regime.value]
        return ScalingLaw(
            center_coeff=(1.0 + 1.0 / gamma) ** 2,
            scale_coeff=(1.0 + gamma) ** (4.0 / 3.0) / gamma,
            argument="M",
            exponent=THIRD,
            law=LimitLaw(tag),
        )
    if regime is Regime.GAUSS_PI:
        return ScalingLaw(
            center_coeff=_gauss_center_coeff(p.pi, gamma2),
            scale_coeff=_gauss_scale_coeff(p.pi, gamma2),
            argument="N",
            exponent=0.5,
            law=LimitLaw("G1"),
        )
    if regime is Regime.GAUSS_ETA:
        return ScalingLaw(
            center_coeff=_gauss_center_coeff(p.eta, 1.0 / gamma2),
            scale_coeff=_gauss_scale_coeff(p.eta, 1.0 / gamma2),
            argument="M",
            exponent=0.5,
            law=LimitLaw("G1"),
        )

    # G^2 line: the product of the two branch CLTs.  The scale is the
    # geometric mean of the per-sqrt(N) branch coefficients B_pi and
    # gamma*B_eta and the factor their ratio, which for gamma = 1 reduces
    # to the usual printed form; Monte Carlo at gamma != 1 confirms this
    # normalization (see tests).
    pi = p.pi
    var = (1.0 - pi + pi * gamma2) * ((1.0 - pi) ** 2 - pi * pi * gamma2) / (
        gamma * pi * pi * (1.0 - pi) ** 2
    )
    c = math.sqrt((1.0 - pi + gamma2 * pi) / gamma)
    return ScalingLaw(
        center_coeff=_gauss_center_coeff(pi, gamma2),
        scale_coeff=math.sqrt(var),
        argument="N",
        exponent=0.5,
        law=LimitLaw("G1_PRODUCT", product_factor=c),
    )


def critical_speed(tp: TasepParams) -> float:
    """Shock speed 1 - (rho_minus + rho_plus); defined for rho_minus <=
    rho_plus (equality gives the characteristic speed 1 - 2 rho)."""
    if tp.rho_minus > tp.rho_plus:
        raise ParamError("no single shock speed when rho_minus > rho_plus")
    return 1.0 - (tp.rho_minus + tp.rho_plus)


def hydro_height(y: float, tp: TasepParams) -> float:
    """Hydrodynamic limit of h_t([yt])/t."""
    if not abs(y) < 1.0:
        raise ParamError(f"|y| must be < 1, got {y}")
    rm, rp = tp.rho_minus, tp.rho_plus

    def line(rho):
        return (1.0 - 2.0 * rho) * y + 2.0 * rho * (1.0 - rho)

    if rm < rp:
        return line(rm) if y <= 1.0 - (rm + rp) else line(rp)
    if rm > rp:
        if y <= 1.0 - 2.0 * rm:
            return line(rm)
        if y <= 1.0 - 2.0 * rp:
            return 0.5 * (y * y + 1.0)
        return line(rp)
    return line(rm)


def ferrari_fontes(rho: float, y: float) -> tuple[float, float]:
    """Equilibrium LLN/CLT rates for the current past a speed-y observer:
    (mean rate, variance rate)."""
    if not 0.0 < rho < 1.0:
        raise ParamError(f"rho must be in (0, 1), got {rho}")
    chi = rho * (1.0 - rho)
    return chi - y * rho, chi * abs((1.0 - 2.0 * rho) - y)


def tasep_limit_law(tp: TasepParams, y: float):
    """Height-fluctuation law for an observer at speed y, or UNSUPPORTED
    for the Gaussian sub-regions the LPP route does not reach.

    Scaling convention: P(t*hbar(y) - h_t([yt]) <= scale(t) * x) -> law(x),
    i.e. the rescaled sample is (center - raw)/scale (``flipped``).
    """
    if not abs(y) < 1.0:
        raise ParamError(f"|y| must be < 1, got {y}")
    rm, rp = tp.rho_minus, tp.rho_plus
    hbar = hydro_height(y, tp)

    def cube_root_law(tag):
        return ScalingLaw(
            center_coeff=hbar,
            scale_coeff=2.0 ** (-THIRD) * (1.0 - y * y) ** (2.0 / 3.0),
            argument="t",
            exponent=THIRD,
            law=LimitLaw(tag),
            flipped=True,
        )

    def gauss_right():
        if y >= 1.0 - rp:
            return UNSUPPORTED
        var = 4.0 * rp * (1.0 - rp) * (y - 1.0 + 2.0 * rp)
        if var <= 0.0:
            return UNSUPPORTED
        return ScalingLaw(hbar, math.sqrt(var), "t", 0.5, LimitLaw("G1"), flipped=True)

    def gauss_left():
        if y <= -rm:
            return UNSUPPORTED
        var = 4.0 * rm * (1.0 - rm) * (-y + 1.0 - 2.0 * rm)
        if var <= 0.0:
            return UNSUPPORTED
        return ScalingLaw(hbar, math.sqrt(var), "t", 0.5, LimitLaw("G1"), flipped=True)

    if abs(rm - rp) <= BOUNDARY_TOL:
        if abs(y - (1.0 - 2.0 * rm)) <= BOUNDARY_TOL:
            return cube_root_law("F11")
        return gauss_right() if y > 1.0 - 2.0 * rm else gauss_left()

    if rm < rp:
        yc = 1.0 - (rm + rp)
        if abs(y - yc) <= BOUNDARY_TOL:
            # G1(a x) G1(b x) recast as G1(c x) G1(x / c) by folding
            # sqrt(a b) into the scale
            a = 1.0 / math.sqrt(4.0 * rp * (1.0 - rp))
            b = 1.0 / math.sqrt(4.0 * rm * (1.0 - rm))
            scale = math.sqrt((rp - rm)) / math.sqrt(a * b)
            return ScalingLaw(hbar, scale, "t", 0.5,
                              LimitLaw("G1_PRODUCT", product_factor=math.sqrt(a / b)),
                              flipped=True)
        return gauss_right() if y > yc else gauss_left()

    # rarefaction fan
    lo, hi = 1.0 - 2.0 * rm, 1.0 - 2.0 * rp
    if abs(y - lo) <= BOUNDARY_TOL or abs(y - hi) <= BOUNDARY_TOL:
        return cube_root_law("F1")
    if lo < y < hi:
        return cube_root_law("F0")
    return gauss_right() if y > hi else gauss_left()


def invert_time(a: float, b: float, root: float, big_m: float) -> float:
    """First-order inversion of M = a t + b t**root for t, root in {1/2, 1/3}."""
    if a <= 0.0:
        raise ParamError(f"leading coefficient must be positive, got {a}")
    if root == 0.5:
        return big_m / a - a ** (-1.5) * b * math.sqrt(big_m)
    if root == THIRD or root == 1.0 / 3.0:
        return big_m / a - a ** (-4.0 / 3.0) * b * big_m ** THIRD
    raise ParamError(f"root must be 1/2 or 1/3, got {root}")


@dataclass(frozen=True)
class GridMapping:
    """Result of mapping a height observation to an LPP corner event."""

    shape: GridShape
    aspect: AspectRatio
    time_map: ScalingLaw
    parity_adjust: int


def observation_to_grid(tp: TasepParams, obs: Observation, x: float = 0.0) -> GridMapping:
    """Translate the height event h_t([yt]) >= level into the LPP corner
    (N, M), the asymptotic aspect ratio, and the inverted t(dim) map.

    ``level`` is t*hbar(y) - scale(t)*x, rounded with a parity fix of at
    most 1 so that level + [yt] is even (h_t(j) + j is always even).
    """
    law = tasep_limit_law(tp, obs.y)
    if law is UNSUPPORTED:
        raise ParamError("observation falls outside the proven regions")

    hbar = hydro_height(obs.y, tp)
    j = math.floor(obs.y * obs.t)
    level_real = obs.t * hbar - law.scale(obs.t) * x
    level = round(level_real)
    adjust = 0
    if (level + j) % 2 != 0:
        adjust = 1 if level_real >= level else -1
        level += adjust
    n = (level + j) // 2
    m = (level - j) // 2
    if n < 1 or m < 1:
        raise ParamError(f"mapped shape ({n}, {m}) is not positive")
    shape = GridShape(n, m)

    denom = hbar + obs.y
    numer = hbar - obs.y
    if denom <= 0.0 or numer <= 0.0:
        raise ParamError("height profile does not dominate |y|; no aspect limit")
    aspect = AspectRatio(math.sqrt(numer / denom))

    if law.exponent == THIRD:
        # cube-root cases invert to the LPP centering/scale at this gamma
        gamma = aspect.gamma
        time_map = ScalingLaw(
            center_coeff=(1.0 + 1.0 / gamma) ** 2,
            scale_coeff=(1.0 + gamma) ** (4.0 / 3.0) / gamma,
            argument="M",
            exponent=THIRD,
            law=law.law,
        )
    else:
        # order-1/2 cases: N = c_N t + d t^{1/2} with d = -scale_t * x / 2,
        # inverted to t(N) = N/c_N + c_N^{-3/2} (scale_t/2) sqrt(N) x
        c_n = 0.5 * (hbar + obs.y)
        time_map = ScalingLaw(
            center_coeff=1.0 / c_n,
            scale_coeff=c_n ** (-1.5) * law.scale_coeff / 2.0,
            argument="N",
            exponent=0.5,
            law=law.law,
        )
    return GridMapping(shape=shape, aspect=aspect, time_map=time_map, parity_adjust=adjust)
