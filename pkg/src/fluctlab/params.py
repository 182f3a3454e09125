"""Domain parameter types shared across the package.

Every type validates its own invariants on construction and raises
``ParamError`` on violation, so downstream code can assume well-formed
inputs.  All reals are 64-bit floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class ParamError(ValueError):
    """A domain parameter violates its invariants."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParamError(msg)


@dataclass(frozen=True)
class BoundaryParams:
    """Rates of the boundary exponentials: ``pi`` on the bottom row,
    ``eta`` on the left column.  Both must lie in (0, 1]; rate-0
    exponentials (infinite weights) are rejected as degenerate."""

    pi: float
    eta: float

    def __post_init__(self):
        for name, v in (("pi", self.pi), ("eta", self.eta)):
            _require(isinstance(v, (int, float)) and math.isfinite(v), f"{name} must be finite")
            _require(0.0 < v <= 1.0, f"{name} must be in (0, 1], got {v}")


@dataclass(frozen=True)
class AspectRatio:
    """The limit gamma of sqrt(M/N) as the grid grows."""

    gamma: float

    def __post_init__(self):
        _require(math.isfinite(self.gamma) and self.gamma > 0.0,
                 f"gamma must be a positive finite real, got {self.gamma}")

    @property
    def gamma2(self) -> float:
        return self.gamma * self.gamma


@dataclass(frozen=True)
class GridShape:
    """Grid corner (N, M): N columns, M rows; sites are (i, j) with
    0 <= i <= N and 0 <= j <= M."""

    n_cols: int
    n_rows: int

    def __post_init__(self):
        _require(isinstance(self.n_cols, int) and self.n_cols >= 1, "n_cols must be an integer >= 1")
        _require(isinstance(self.n_rows, int) and self.n_rows >= 1, "n_rows must be an integer >= 1")

    @property
    def n(self) -> int:
        return self.n_cols

    @property
    def m(self) -> int:
        return self.n_rows


@dataclass(frozen=True)
class TasepParams:
    """Two-sided Bernoulli initial data: density rho_minus left of the
    origin (inclusive), rho_plus strictly right of it."""

    rho_minus: float
    rho_plus: float

    def __post_init__(self):
        for name, v in (("rho_minus", self.rho_minus), ("rho_plus", self.rho_plus)):
            _require(isinstance(v, (int, float)) and math.isfinite(v), f"{name} must be finite")
            _require(0.0 <= v <= 1.0, f"{name} must be in [0, 1], got {v}")


@dataclass(frozen=True)
class Observation:
    """An observer moving at speed y, watched up to time t."""

    y: float
    t: float

    def __post_init__(self):
        _require(math.isfinite(self.y) and abs(self.y) < 1.0, f"|y| must be < 1, got {self.y}")
        _require(math.isfinite(self.t) and self.t > 0.0, f"t must be positive, got {self.t}")


class Regime(Enum):
    """Fluctuation regime of the two-sided LPP last passage time."""

    GUE = "GUE"
    GOE2_PI = "GOE2_PI"
    GOE2_ETA = "GOE2_ETA"
    CRITICAL_F11 = "CRITICAL_F11"
    GAUSS_PI = "GAUSS_PI"
    GAUSS_ETA = "GAUSS_ETA"
    G_SQUARED = "G_SQUARED"


_THIRD_LAWS = frozenset({"F0", "F1", "F11"})
_HALF_LAWS = frozenset({"G1", "G1_PRODUCT"})


@dataclass(frozen=True)
class LimitLaw:
    """Limit-law tag; ``product_factor`` c is present only for G1_PRODUCT,
    whose CDF is x -> G1(c*x) * G1(x/c)."""

    tag: str
    product_factor: float | None = None

    def __post_init__(self):
        _require(self.tag in _THIRD_LAWS | _HALF_LAWS, f"unknown law tag {self.tag!r}")
        if self.tag == "G1_PRODUCT":
            _require(self.product_factor is not None and self.product_factor > 0.0,
                     "G1_PRODUCT requires a positive product_factor")
        else:
            _require(self.product_factor is None, f"{self.tag} takes no product_factor")


@dataclass(frozen=True)
class ScalingLaw:
    """Centering and scale of a fluctuation statement.

    center(d) = center_coeff * d and scale(d) = scale_coeff * d**exponent,
    where d is the grid dimension named by ``argument`` ('N' or 'M') or the
    observation time ('t').  ``flipped`` marks the height-function
    orientation, where the rescaled sample is (center - raw) / scale
    rather than (raw - center) / scale.
    """

    center_coeff: float
    scale_coeff: float
    argument: str
    exponent: float
    law: LimitLaw
    flipped: bool = False

    def __post_init__(self):
        _require(self.argument in ("N", "M", "t"), f"bad argument {self.argument!r}")
        _require(self.exponent in (0.5, 1.0 / 3.0), "exponent must be 1/2 or 1/3")
        _require(self.scale_coeff > 0.0, "scale_coeff must be positive")
        fam = _THIRD_LAWS if self.exponent == 1.0 / 3.0 else _HALF_LAWS
        _require(self.law.tag in fam,
                 f"exponent {self.exponent} incompatible with law {self.law.tag}")

    def _dim(self, shape_or_value) -> float:
        if isinstance(shape_or_value, GridShape):
            return float(shape_or_value.n_cols if self.argument == "N" else shape_or_value.n_rows)
        return float(shape_or_value)

    def center(self, shape_or_value) -> float:
        return self.center_coeff * self._dim(shape_or_value)

    def scale(self, shape_or_value) -> float:
        return self.scale_coeff * self._dim(shape_or_value) ** self.exponent

    def rescale(self, raw, shape_or_value):
        """Map raw statistics onto the law's native axis."""
        c = self.center(shape_or_value)
        s = self.scale(shape_or_value)
        return (c - raw) / s if self.flipped else (raw - c) / s


@dataclass(frozen=True)
class StreamKey:
    """(seed, replica) pair that fully determines every sampled weight.
    Seeds are reduced to their 64-bit value (two's complement)."""

    seed: int
    replica: int = 0

    def __post_init__(self):
        _require(isinstance(self.seed, int), "seed must be an integer")
        _require(isinstance(self.replica, int) and 0 <= self.replica < 2**63,
                 "replica must be a nonnegative 63-bit integer")
        wrapped = ((self.seed & (2**64 - 1)) ^ 2**63) - 2**63
        object.__setattr__(self, "seed", wrapped)
