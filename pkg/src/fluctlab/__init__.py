"""Monte Carlo laboratory for two-sided TASEP and last passage percolation
with boundary sources: exact regime/constant calculators, seeded simulators,
reference distribution functions, and an experiment CLI."""

from .params import (
    AspectRatio,
    BoundaryParams,
    GridShape,
    LimitLaw,
    Observation,
    ParamError,
    Regime,
    ScalingLaw,
    StreamKey,
    TasepParams,
)

__version__ = "0.1.0"

__all__ = [
    "AspectRatio",
    "BoundaryParams",
    "GridShape",
    "LimitLaw",
    "Observation",
    "ParamError",
    "Regime",
    "ScalingLaw",
    "StreamKey",
    "TasepParams",
    "__version__",
]
