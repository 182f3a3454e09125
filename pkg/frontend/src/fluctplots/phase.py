"""Phase-diagram rendering from classification sweep CSVs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.lines import Line2D

from .io import FormatError, RegionGrid, read_regions

REGIME_ORDER = ["GUE", "GOE2_PI", "GOE2_ETA", "CRITICAL_F11",
                "GAUSS_PI", "GAUSS_ETA", "G_SQUARED"]

REGIME_COLORS = {
    "GUE": "#b0413e",
    "GOE2_PI": "#e6842a",
    "GOE2_ETA": "#e8b82a",
    "CRITICAL_F11": "#2c2c2c",
    "GAUSS_PI": "#3f7fbf",
    "GAUSS_ETA": "#62a8d6",
    "G_SQUARED": "#3d8f5f",
}

#: data-level tolerance for boundary points (checked before rendering)
CURVE_TOL = 1e-9


@dataclass
class PhaseDiagramSpec:
    gamma: float
    resolution: int | None = None
    colors: dict = field(default_factory=lambda: dict(REGIME_COLORS))
    curve_samples: int = 512


@dataclass
class PhaseDiagramResult:
    png_path: Path
    svg_path: Path
    critical_point: tuple[float, float]
    third_order_centroid: tuple[float, float]
    third_order_fraction: float
    resolution: int


def _g2_eta(pi: float, gamma: float) -> float:
    ginv2 = 1.0 / (gamma * gamma)
    return pi / (pi * (1.0 - ginv2) + ginv2)


def boundary_curves(gamma: float, samples: int = 512):
    """Overlay curve point sets, each validated against its defining
    equation to CURVE_TOL."""
    pi_c = 1.0 / (1.0 + gamma)
    eta_c = gamma / (1.0 + gamma)
    u = (np.arange(samples) + 0.5) / samples
    curves = {
        "pi_critical": (np.full(samples, pi_c), eta_c + (1.0 - eta_c) * u),
        "eta_critical": (pi_c + (1.0 - pi_c) * u, np.full(samples, eta_c)),
        "g2_curve": (u * pi_c, np.array([_g2_eta(p, gamma) for p in u * pi_c])),
    }
    for name, (pis, etas) in curves.items():
        if name == "pi_critical":
            err = np.max(np.abs(pis - pi_c))
        elif name == "eta_critical":
            err = np.max(np.abs(etas - eta_c))
        else:
            err = np.max(np.abs(etas - np.array([_g2_eta(p, gamma) for p in pis])))
        if err > CURVE_TOL:
            raise FormatError(f"curve {name} violates its equation by {err}")
    return curves


def _grid_from_rows(grid: RegionGrid):
    pis = np.unique(grid.pi)
    etas = np.unique(grid.eta)
    res = len(pis)
    if res * len(etas) != len(grid.pi):
        raise FormatError("classification rows do not form a full grid")
    codes = np.full((len(etas), res), -1, dtype=int)
    expo = np.full((len(etas), res), np.nan)
    code_of = {name: k for k, name in enumerate(REGIME_ORDER)}
    ii = np.searchsorted(pis, grid.pi)
    jj = np.searchsorted(etas, grid.eta)
    for k in range(len(grid.pi)):
        codes[jj[k], ii[k]] = code_of[str(grid.regime[k])]
        expo[jj[k], ii[k]] = grid.exponent[k]
    if (codes < 0).any():
        raise FormatError("classification grid has holes")
    return pis, etas, codes, expo


def plot_phase_diagram(spec: PhaseDiagramSpec, regions_csv, out_base) -> PhaseDiagramResult:
    """Render the regime partition of (pi, eta) with boundary overlays to
    out_base.png and out_base.svg."""
    grid = read_regions(regions_csv)
    if abs(grid.gamma - spec.gamma) > 1e-12:
        raise FormatError(f"sweep gamma {grid.gamma} does not match spec gamma {spec.gamma}")
    pis, etas, codes, expo = _grid_from_rows(grid)
    res = len(pis)
    if spec.resolution is not None and spec.resolution != res:
        raise FormatError(f"sweep resolution {res} != requested {spec.resolution}")

    curves = boundary_curves(spec.gamma, spec.curve_samples)
    pi_c = 1.0 / (1.0 + spec.gamma)
    eta_c = spec.gamma / (1.0 + spec.gamma)

    third = expo < 0.4
    frac = float(third.mean())
    cy, cx = np.nonzero(third)
    centroid = (float(pis[cx].mean()), float(etas[cy].mean())) if len(cx) else (math.nan,) * 2

    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    cmap = ListedColormap([spec.colors[name] for name in REGIME_ORDER])
    ax.imshow(codes, origin="lower", extent=(0, 1, 0, 1), cmap=cmap,
              vmin=-0.5, vmax=len(REGIME_ORDER) - 0.5, interpolation="nearest",
              aspect="equal")
    for name, (cx_, cy_) in curves.items():
        style = "-" if name != "g2_curve" else "--"
        ax.plot(cx_, cy_, style, color="white", lw=1.4)
    ax.plot([pi_c], [eta_c], marker="o", color="black", ms=7, mfc="white")
    ax.annotate(f"({pi_c:.3g}, {eta_c:.3g})", (pi_c, eta_c),
                textcoords="offset points", xytext=(6, -12), fontsize=8)
    present = [name for name in REGIME_ORDER if (codes == REGIME_ORDER.index(name)).any()]
    ax.legend(handles=[Line2D([], [], marker="s", ls="", color=spec.colors[n], label=n)
                       for n in present],
              loc="upper left", fontsize=7, framealpha=0.85)
    ax.set_xlabel("bottom-row rate")
    ax.set_ylabel("left-column rate")
    ax.set_title(f"fluctuation diagram, gamma = {spec.gamma:g}")

    out_base = Path(out_base)
    out_base.parent.mkdir(parents=True, exist_ok=True)
    png = out_base.with_suffix(".png")
    svg = out_base.with_suffix(".svg")
    fig.savefig(png, dpi=150)
    fig.savefig(svg)
    plt.close(fig)
    return PhaseDiagramResult(
        png_path=png, svg_path=svg,
        critical_point=(pi_c, eta_c),
        third_order_centroid=centroid,
        third_order_fraction=frac,
        resolution=res,
    )
