"""Command line front end: render phase diagrams and CDF overlays."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import FormatError
from .overlay import plot_cdf_overlay
from .phase import PhaseDiagramSpec, plot_phase_diagram


def _cmd_phase(args) -> int:
    spec = PhaseDiagramSpec(gamma=args.gamma)
    res = plot_phase_diagram(spec, args.regions, args.out)
    print(f"wrote {res.png_path} and {res.svg_path} "
          f"(critical point {res.critical_point[0]:.4g}, {res.critical_point[1]:.4g})")
    return 0


def _cmd_overlay(args) -> int:
    res = plot_cdf_overlay(args.samples, args.table, args.out,
                           square_reference=args.square)
    print(f"wrote {res.png_path} and {res.svg_path} (KS = {res.ks:.4f})")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fluctplots",
                                 description="figures from fluctlab outputs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phase", help="phase diagram from a classify sweep CSV")
    p.add_argument("--regions", type=Path, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_phase)

    o = sub.add_parser("overlay", help="ECDF vs reference table overlay")
    o.add_argument("--samples", type=Path, required=True)
    o.add_argument("--table", type=Path, required=True)
    o.add_argument("--square", action="store_true",
                   help="square the table CDF before comparing")
    o.add_argument("--out", type=Path, required=True)
    o.set_defaults(func=_cmd_overlay)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
