"""Batch figure renderer for fluctlab outputs.

Reads only the documented interchange files (classification sweep CSV,
sample CSV, CDF table files); no simulation happens here.
"""

from .io import CdfTableFile, read_regions, read_samples
from .overlay import OverlayResult, plot_cdf_overlay
from .phase import PhaseDiagramResult, PhaseDiagramSpec, plot_phase_diagram

__version__ = "0.1.0"

__all__ = [
    "CdfTableFile",
    "OverlayResult",
    "PhaseDiagramResult",
    "PhaseDiagramSpec",
    "plot_cdf_overlay",
    "plot_phase_diagram",
    "read_regions",
    "read_samples",
    "__version__",
]
