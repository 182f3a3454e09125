"""Experiment orchestration: classify regimes, run seeded ensembles to CSV,
compare samples against reference laws, and write distribution tables.

Exit codes: 0 success, 2 invalid parameters, 3 aborted-replica rate above
0.1%.  Thread count comes from FLUCTLAB_THREADS (default: machine
parallelism); results are independent of its value because every replica
is keyed by its index.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, diststats, lpp, mapping, tasep, theory
from .params import (
    AspectRatio,
    BoundaryParams,
    GridShape,
    LimitLaw,
    Observation,
    ParamError,
    ScalingLaw,
    TasepParams,
)

_CSV_HEADER = "replica,raw,rescaled\n"
_CHUNK = 512


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _apply_threads() -> int:
    env = os.environ.get("FLUCTLAB_THREADS")
    import numba

    if env:
        n = max(1, int(env))
        numba.set_num_threads(n)
        return n
    return numba.get_num_threads()


def _law_dict(law: ScalingLaw) -> dict:
    d = {
        "center_coeff": law.center_coeff,
        "scale_coeff": law.scale_coeff,
        "argument": law.argument,
        "exponent": law.exponent,
        "law": law.law.tag,
        "flipped": law.flipped,
    }
    if law.law.product_factor is not None:
        d["product_factor"] = law.law.product_factor
    return d


def _law_pretty(law: ScalingLaw) -> str:
    e = "1/3" if law.exponent != 0.5 else "1/2"
    tag = law.law.tag
    if law.law.product_factor is not None:
        tag += f"(c={law.law.product_factor:.6g})"
    return (f"center={_fmt(law.center_coeff)}*{law.argument}, "
            f"scale={_fmt(law.scale_coeff)}*{law.argument}^{e}, law={tag}")


# --------------------------------------------------------------------------
# classify
# --------------------------------------------------------------------------

def _cmd_classify(args) -> int:
    if args.model == "lpp":
        g = AspectRatio(args.gamma)
        if args.grid:
            return _classify_sweep(args, g)
        p = BoundaryParams(args.pi, args.eta)
        regime = theory.classify_lpp_regime(p, g)
        law = theory.lpp_scaling_law(p, g)
        print(f"regime={regime.value}")
        print(_law_pretty(law))
        return 0
    tp = TasepParams(args.rho_minus, args.rho_plus)
    law = theory.tasep_limit_law(tp, args.y)
    if law is theory.UNSUPPORTED:
        print("UNSUPPORTED")
        return 0
    print(_law_pretty(law))
    return 0


def _classify_sweep(args, g: AspectRatio) -> int:
    res = args.grid
    rows = ["gamma,pi,eta,regime,exponent,law"]
    for i in range(res):
        pi = (i + 0.5) / res
        for j in range(res):
            eta = (j + 0.5) / res
            p = BoundaryParams(pi, eta)
            regime = theory.classify_lpp_regime(p, g)
            law = theory.lpp_scaling_law(p, g)
            rows.append(f"{_fmt(g.gamma)},{_fmt(pi)},{_fmt(eta)},"
                        f"{regime.value},{_fmt(law.exponent)},{law.law.tag}")
    out = Path(args.out)
    out.write_text("\n".join(rows) + "\n")
    if args.curves:
        samples = 513
        crows = ["gamma,curve,pi,eta"]
        pi_c = 1.0 / (1.0 + g.gamma)
        eta_c = g.gamma / (1.0 + g.gamma)
        for k in range(samples):
            u = (k + 0.5) / samples
            crows.append(f"{_fmt(g.gamma)},pi_critical,{_fmt(pi_c)},{_fmt(eta_c + (1 - eta_c) * u)}")
            crows.append(f"{_fmt(g.gamma)},eta_critical,{_fmt(pi_c + (1 - pi_c) * u)},{_fmt(eta_c)}")
            pi = u * pi_c
            if pi > 0:
                crows.append(f"{_fmt(g.gamma)},g2_curve,{_fmt(pi)},"
                             f"{_fmt(theory.g2_curve_eta(pi, g))}")
        Path(args.curves).write_text("\n".join(crows) + "\n")
    print(f"wrote {out}")
    return 0


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------

def _simulate_config(args) -> dict:
    cfg = {
        "model": args.model,
        "replicas": args.replicas,
        "seed": args.seed,
        "out": str(args.out),
    }
    if args.model == "lpp":
        cfg.update(spec=args.spec, pi=args.pi, eta=args.eta, gamma=args.gamma,
                   n=args.n, rho_minus=args.rho_minus, rho_plus=args.rho_plus)
    else:
        cfg.update(rho_minus=args.rho_minus, rho_plus=args.rho_plus,
                   y=args.y, t=args.t)
    return cfg


def _lpp_setup(cfg):
    gamma = AspectRatio(cfg["gamma"])
    n = cfg["n"]
    m = int(round(gamma.gamma2 * n))
    shape = GridShape(n, m)
    kind = cfg["spec"]
    if kind == "two-sided":
        p = BoundaryParams(cfg["pi"], cfg["eta"])
        spec = lpp.TwoSided(p.pi, p.eta)
        law = theory.lpp_scaling_law(p, gamma)
        regime = theory.classify_lpp_regime(p, gamma).value
    elif kind == "one-sided":
        spec = lpp.OneSided(cfg["eta"])
        law = theory.lpp_scaling_law(BoundaryParams(1.0, cfg["eta"]), gamma)
        regime = theory.classify_lpp_regime(BoundaryParams(1.0, cfg["eta"]), gamma).value
    elif kind == "zero":
        spec = lpp.ZeroBoundary()
        law = theory.lpp_scaling_law(BoundaryParams(1.0, 1.0), gamma)
        regime = theory.classify_lpp_regime(BoundaryParams(1.0, 1.0), gamma).value
    elif kind == "padded":
        tp = TasepParams(cfg["rho_minus"], cfg["rho_plus"])
        p = mapping.tasep_to_lpp_params(tp)
        spec = mapping.PaddedBoundarySpec(tp.rho_minus, tp.rho_plus)
        law = theory.lpp_scaling_law(p, gamma)
        regime = theory.classify_lpp_regime(p, gamma).value
    else:
        raise ParamError(f"unknown lpp spec {kind!r}")
    return shape, spec, law, regime


def _run_simulate(cfg) -> tuple[int, dict]:
    out = Path(cfg["out"])
    seed = cfg["seed"]
    replicas = cfg["replicas"]
    t0 = time.time()
    aborted = 0
    out.write_text(_CSV_HEADER)

    if cfg["model"] == "lpp":
        shape, spec, law, regime = _lpp_setup(cfg)
        dim = shape
        with out.open("a") as fh:
            for start in range(0, replicas, _CHUNK):
                stop = min(start + _CHUNK, replicas)
                if isinstance(spec, mapping.PaddedBoundarySpec):
                    l2, _, _ = lpp._run_padded(shape, spec.rho_minus, spec.rho_plus,
                                               seed, start, stop - start)
                else:
                    l2, _, _ = lpp._run(shape, spec, seed, start, stop - start)
                for k, raw in enumerate(l2):
                    fh.write(f"{start + k},{_fmt(raw)},{_fmt(law.rescale(raw, dim))}\n")
                fh.flush()
    else:
        tp = TasepParams(cfg["rho_minus"], cfg["rho_plus"])
        law = theory.tasep_limit_law(tp, cfg["y"])
        if law is theory.UNSUPPORTED:
            raise ParamError("observation falls in an unsupported Gaussian sub-region")
        regime = law.law.tag
        t = cfg["t"]
        j = math.floor(cfg["y"] * t)
        dim = t
        with out.open("a") as fh:
            for start in range(0, replicas, _CHUNK):
                stop = min(start + _CHUNK, replicas)
                heights, _ = tasep.height_ensemble(tp, t, j, j, seed, stop - start,
                                                   rep_offset=start)
                for k, raw in enumerate(heights[:, 0]):
                    fh.write(f"{start + k},{_fmt(raw)},{_fmt(law.rescale(raw, dim))}\n")
                fh.flush()

    manifest = {
        "tool": "fluctlab",
        "version": __version__,
        "config": {k: v for k, v in cfg.items()},
        "regime": regime,
        "scaling": _law_dict(law),
        "aborted_replicas": aborted,
        "wall_time_s": round(time.time() - t0, 3),
    }
    mpath = out.with_suffix(out.suffix + ".manifest.json")
    mpath.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    if aborted > 0.001 * replicas:
        return 3, manifest
    return 0, manifest


def _cmd_simulate(args) -> int:
    if args.from_manifest:
        cfg = json.loads(Path(args.from_manifest).read_text())["config"]
        if args.out:
            cfg["out"] = str(args.out)
    else:
        if args.replicas is None or args.replicas < 1:
            print("error: --replicas must be >= 1", file=sys.stderr)
            return 2
        if args.seed is None:
            print("error: --seed is mandatory for simulate", file=sys.stderr)
            return 2
        if args.out is None:
            print("error: --out is required", file=sys.stderr)
            return 2
        cfg = _simulate_config(args)
    code, manifest = _run_simulate(cfg)
    print(f"wrote {cfg['out']} ({cfg['replicas']} replicas, regime {manifest['regime']})")
    return code


# --------------------------------------------------------------------------
# compare
# --------------------------------------------------------------------------

def _load_samples(path) -> np.ndarray:
    lines = Path(path).read_text().strip().splitlines()
    if len(lines) <= 1:
        raise ParamError(f"no samples in {path}")
    if lines[0] != _CSV_HEADER.strip():
        raise ParamError(f"unexpected CSV header in {path}")
    return np.array([float(ln.split(",")[2]) for ln in lines[1:]])


def _resolve_law(tag: str, factor) -> LimitLaw:
    if tag == "G1_PRODUCT":
        if factor is None:
            raise ParamError("G1_PRODUCT needs --factor")
        return LimitLaw(tag, product_factor=factor)
    return LimitLaw(tag)


def _cmd_compare(args) -> int:
    samples = _load_samples(args.samples)
    law = _resolve_law(args.law, args.factor)
    ref = diststats.reference_cdf(law, order=args.order)
    ecdf = diststats.Ecdf(samples)
    ks = diststats.ks_statistic(ecdf, ref)
    stats = diststats.summarize(ecdf)
    lo, hi = (-10.0, 10.0)
    ref_mean, ref_var = diststats.table_moments(ref, lo, hi)
    report = {
        "samples": str(args.samples),
        "law": law.tag,
        "count": stats.count,
        "ks": ks,
        "threshold": args.threshold,
        "passed": bool(ks < args.threshold),
        "mean": stats.mean,
        "se_mean": stats.se_mean,
        "variance": stats.variance,
        "se_variance": stats.se_variance,
        "skewness": stats.skewness,
        "ref_mean": ref_mean,
        "ref_variance": ref_var,
    }
    if law.product_factor is not None:
        report["product_factor"] = law.product_factor
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


# --------------------------------------------------------------------------
# twtab / map-check
# --------------------------------------------------------------------------

def _cmd_twtab(args) -> int:
    tab = diststats.build_tw_table(args.family, order=args.order,
                                   x_min=args.x_min, x_max=args.x_max,
                                   step=args.step)
    tab.save(args.out)
    print(f"wrote {args.out} ({len(tab.xs)} rows)")
    return 0


def _cmd_map_check(args) -> int:
    tp = TasepParams(args.rho_minus, args.rho_plus)
    results = mapping.correspondence_grid(tp, args.t, args.max_sum,
                                          args.replicas, args.seed)
    pts = []
    ok = 0
    for shape, r in results:
        inside = r.gap <= 3.0 * r.combined_se
        ok += inside
        pts.append({
            "n": shape.n_cols, "m": shape.n_rows,
            "p_height": r.p_height, "se_height": r.se_height,
            "p_lpp": r.p_lpp, "se_lpp": r.se_lpp,
            "within_3se": bool(inside),
        })
    report = {
        "rho_minus": tp.rho_minus, "rho_plus": tp.rho_plus, "t": args.t,
        "replicas": args.replicas, "points": pts,
        "fraction_within_3se": ok / len(pts),
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote {args.out} ({ok}/{len(pts)} within 3 SE)")
    else:
        print(text)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fluctlab",
                                 description="TASEP / LPP fluctuation laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="print regime and scaling constants")
    c.add_argument("--model", choices=["lpp", "tasep"], required=True)
    c.add_argument("--pi", type=float)
    c.add_argument("--eta", type=float)
    c.add_argument("--gamma", type=float, default=1.0)
    c.add_argument("--rho-minus", type=float)
    c.add_argument("--rho-plus", type=float)
    c.add_argument("--y", type=float)
    c.add_argument("--grid", type=int, help="sweep resolution; write CSV to --out")
    c.add_argument("--out", type=Path)
    c.add_argument("--curves", type=Path, help="also write boundary curve samples")
    c.set_defaults(func=_cmd_classify)

    s = sub.add_parser("simulate", help="run an ensemble to CSV + manifest")
    s.add_argument("--model", choices=["lpp", "tasep"])
    s.add_argument("--spec", choices=["two-sided", "one-sided", "zero", "padded"],
                   default="two-sided")
    s.add_argument("--pi", type=float)
    s.add_argument("--eta", type=float)
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--n", type=int)
    s.add_argument("--rho-minus", type=float)
    s.add_argument("--rho-plus", type=float)
    s.add_argument("--y", type=float, default=0.0)
    s.add_argument("--t", type=float)
    s.add_argument("--replicas", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", type=Path)
    s.add_argument("--from-manifest", type=Path)
    s.set_defaults(func=_cmd_simulate)

    k = sub.add_parser("compare", help="KS report of samples vs a reference law")
    k.add_argument("--samples", type=Path, required=True)
    k.add_argument("--law", choices=["F0", "F1", "G1", "G1_PRODUCT", "F11"], required=True)
    k.add_argument("--factor", type=float)
    k.add_argument("--threshold", type=float, required=True)
    k.add_argument("--order", type=int, default=64)
    k.add_argument("--out", type=Path)
    k.set_defaults(func=_cmd_compare)

    t = sub.add_parser("twtab", help="write a Tracy-Widom CDF table file")
    t.add_argument("--family", choices=["GUE", "GOE"], required=True)
    t.add_argument("--order", type=int, default=64)
    t.add_argument("--out", type=Path, required=True)
    t.add_argument("--x-min", type=float)
    t.add_argument("--x-max", type=float)
    t.add_argument("--step", type=float, default=0.05)
    t.set_defaults(func=_cmd_twtab)

    m = sub.add_parser("map-check", help="two-ensemble height/passage comparison")
    m.add_argument("--rho-minus", type=float, required=True)
    m.add_argument("--rho-plus", type=float, required=True)
    m.add_argument("--t", type=float, required=True)
    m.add_argument("--max-sum", type=int, required=True)
    m.add_argument("--replicas", type=int, required=True)
    m.add_argument("--seed", type=int, required=True)
    m.add_argument("--out", type=Path)
    m.set_defaults(func=_cmd_map_check)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    _apply_threads()
    try:
        return args.func(args)
    except (ParamError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
