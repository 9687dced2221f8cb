"""Command-line entry point: subcommands, flat config files, bit-exact outputs.

Config files are flat key=value text; flags mirror keys one to one and
override file values.  All outputs land under --out with fixed CSV headers
and a JSON summary embedding the fully resolved configuration.
"""
from __future__ import annotations

import argparse
import hashlib
import os
import sys

import numpy as np

from . import __version__
from .bbd import BbdConfig, bbd_height, scaling_exponent
from .continuum import h_k, remainder_estimate, sample_points
from .csvio import fmt, write_csv, write_json_summary
from .dists import Pareto, a_scale
from .experiments import (
    convergence_experiment,
    derive_seed,
    discrete_heights,
    moment_check,
    phase_sweep,
    rd_limit_check,
)
from .field import FieldSeed
from .forward import Torus, Window, run as forward_run

EXPERIMENTS = (
    "forward", "height", "convergence", "phase-sweep", "bbd", "moments",
    "continuous-sample", "rd-check",
)

_KEYS = {
    "alpha": float, "p": float, "zeta": float, "sigma": float, "xmin": float,
    "T": str, "reps": int, "k": int, "seed": int, "geometry": str, "out": str,
    "zetas": str, "sigmas": str,
}


def _parse_T_list(text):
    try:
        vals = [float(v) for v in str(text).split(",") if v != ""]
    except ValueError:
        raise ValueError(f"key 'T' must be a comma list of positive reals, got {text!r}")
    if not vals or any(v <= 0 for v in vals):
        raise ValueError(f"key 'T' must be a comma list of positive reals, got {text!r}")
    return vals


def _parse_float_list(key, text):
    try:
        return [float(v) for v in str(text).split(",") if v != ""]
    except ValueError:
        raise ValueError(f"key {key!r} must be a comma list of reals, got {text!r}")


def _parse_geometry(text):
    parts = str(text).split(":")
    if parts[0] == "torus" and len(parts) == 2:
        return Torus(int(parts[1]))
    if parts[0] == "window" and len(parts) == 3:
        return Window(int(parts[1]), int(parts[2]))
    raise ValueError(f"key 'geometry' must be torus:L or window:lo:hi, got {text!r}")


def read_config_file(path):
    """Flat key=value lines; '#' comments and blank lines ignored."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"config file not found: {path}")
    out = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{ln}: expected key=value, got {raw.rstrip()!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in _KEYS and key != "experiment":
                raise ValueError(f"{path}:{ln}: unknown key {key!r}")
            out[key] = val
    return out


def parse_config(argv=None):
    """Parse flags (plus optional --config file) into a validated config dict."""
    ap = argparse.ArgumentParser(
        prog="heavybd",
        description="Heavy-tailed ballistic deposition laboratory",
    )
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--config", help="flat key=value config file; flags override it")
    ap.add_argument("--alpha", type=float, help="tail index in (0,2); default 1.5")
    ap.add_argument("--p", type=float, help="sticking parameter in [0,1]")
    ap.add_argument("--zeta", type=float, help="vanishing-sticking exponent (p=T^-zeta)")
    ap.add_argument("--zetas", help="comma list of zeta values (phase-sweep)")
    ap.add_argument("--sigma", type=float, help="Bernoulli block parameter (bbd)")
    ap.add_argument("--sigmas", help="comma list of sigma values (bbd)")
    ap.add_argument("--xmin", type=float, help="Pareto scale; default 1")
    ap.add_argument("--T", help="horizon or comma list of horizons")
    ap.add_argument("--reps", type=int, help="replicates per cell; default 100")
    ap.add_argument("--k", type=int, help="truncation rank for the continuous value; default 512")
    ap.add_argument("--seed", type=int, help="master seed; default 0 (with a warning)")
    ap.add_argument("--geometry", help="torus:L or window:lo:hi (forward); default window:-64:64")
    ap.add_argument("--out", help="output directory; default ./out")
    ns = ap.parse_args(argv)

    cfg = {}
    if ns.config:
        cfg.update(read_config_file(ns.config))
    for key in _KEYS:
        v = getattr(ns, key, None)
        if v is not None:
            cfg[key] = v
    cfg["experiment"] = ns.experiment

    if "seed" not in cfg:
        print("warning: no seed given, using deterministic default 0", file=sys.stderr)
        cfg["seed"] = 0
    if "p" in cfg and "zeta" in cfg:
        raise ValueError("keys 'p' and 'zeta' are contradictory: zeta implies p = T^-zeta")

    typed = {"experiment": cfg["experiment"]}
    for key, caster in _KEYS.items():
        if key in cfg:
            try:
                typed[key] = caster(cfg[key])
            except (TypeError, ValueError):
                raise ValueError(f"key {key!r} has invalid value {cfg[key]!r}")
    typed.setdefault("alpha", 1.5)
    typed.setdefault("xmin", 1.0)
    typed.setdefault("reps", 100)
    typed.setdefault("k", 512)
    typed.setdefault("out", "out")

    alpha = typed["alpha"]
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"key 'alpha' must lie in the open interval (0, 2), got {alpha}")
    if not typed["xmin"] > 0:
        raise ValueError(f"key 'xmin' must be > 0, got {typed['xmin']}")
    if "p" in typed and not 0.0 <= typed["p"] <= 1.0:
        raise ValueError(f"key 'p' must lie in [0, 1], got {typed['p']}")
    if "zeta" in typed and not 0.0 <= typed["zeta"] <= 1.0:
        raise ValueError(f"key 'zeta' must lie in [0, 1], got {typed['zeta']}")
    if "sigma" in typed and not 0.0 < typed["sigma"] <= 1.0:
        raise ValueError(f"key 'sigma' must lie in (0, 1], got {typed['sigma']}")
    if typed["reps"] < 1:
        raise ValueError(f"key 'reps' must be >= 1, got {typed['reps']}")
    if typed["k"] < 1:
        raise ValueError(f"key 'k' must be >= 1, got {typed['k']}")
    if "T" in typed:
        typed["T_list"] = _parse_T_list(typed["T"])
    if "zetas" in typed:
        typed["zeta_list"] = _parse_float_list("zetas", typed["zetas"])
    if "sigmas" in typed:
        typed["sigma_list"] = _parse_float_list("sigmas", typed["sigmas"])
    if "geometry" in typed:
        typed["geometry_obj"] = _parse_geometry(typed["geometry"])
    return typed


def _provenance(cfg):
    skip = ("out", "config")
    blob = ",".join(
        f"{k}={cfg[k]}" for k in sorted(cfg)
        if k not in skip and not k.endswith(("_list", "_obj"))
    )
    digest = hashlib.sha256(blob.encode()).hexdigest()[:12]
    return f"heavybd-{__version__}+cfg.{digest}"


def _summary(cfg, stats, outdir):
    clean = {k: v for k, v in cfg.items() if not k.endswith("_obj")}
    write_json_summary(os.path.join(outdir, "summary.json"), {
        "config": clean,
        "master_seed": cfg["seed"],
        "provenance": _provenance(cfg),
        "stats": stats,
    })


def _cmd_forward(cfg, outdir):
    T = cfg.get("T_list", [25.0])[0]
    geom = cfg.get("geometry_obj", Window(-64, 64))
    p = cfg.get("p", 1.0)
    dist = Pareto(cfg["alpha"], cfg["xmin"])
    intf, log = forward_run(FieldSeed(cfg["seed"]), geom, T, p, dist)
    log.to_csv(os.path.join(outdir, "blocklog.csv"))
    rows = [(x, intf.height(x)) for x in geom.sites()]
    write_csv(os.path.join(outdir, "final_heights.csv"), "site,height", rows)
    stats = {"blocks": len(log.records), "max_height": float(intf.heights.max())}
    print(f"forward: {len(log.records)} blocks on {cfg.get('geometry', 'window:-64:64')} by T={fmt(T)}")
    return stats


def _cmd_height(cfg, outdir):
    T = cfg.get("T_list", [50.0])[0]
    p = cfg.get("p", 1.0)
    if "zeta" in cfg:
        p = T ** (-cfg["zeta"])
    dist = Pareto(cfg["alpha"], cfg["xmin"])
    h = discrete_heights(cfg["seed"], "height", T, p, dist, cfg["reps"])
    scale = a_scale(p * T * T, dist)
    rows = [(r, T, p, cfg["alpha"], float(v), float(v) / scale) for r, v in enumerate(h)]
    write_csv(os.path.join(outdir, "heights.csv"), "rep,T,p,alpha,height,normalized", rows)
    stats = {"mean": float(h.mean()), "median": float(np.median(h)), "scale": scale}
    print(f"height: {cfg['reps']} reps at T={fmt(T)}, p={fmt(p)}, mean={h.mean():.6g}")
    return stats


def _cmd_convergence(cfg, outdir):
    T_list = cfg.get("T_list", [10.0, 25.0, 50.0])
    rep = convergence_experiment(cfg["alpha"], cfg.get("p", 1.0), T_list, cfg["reps"], cfg["k"], cfg["seed"])
    write_csv(os.path.join(outdir, "convergence.csv"), "T,ks,reps,k",
              [(T, k, rep.reps, rep.k) for T, k in zip(rep.T_list, rep.ks)])
    write_csv(os.path.join(outdir, "hsample.csv"), "replicate,k,value",
              [(r, rep.k, float(v)) for r, v in enumerate(rep.reference)])
    for T in rep.T_list:
        # the experiment normalizes with the default unit-scale Pareto
        scale = a_scale(rep.p * T * T, Pareto(rep.alpha))
        rows = [(r, T, rep.p, rep.alpha, float(v) * scale, float(v))
                for r, v in enumerate(rep.heights[T])]
        write_csv(os.path.join(outdir, f"heights_T{fmt(T)}.csv"), "rep,T,p,alpha,height,normalized", rows)
    stats = {"ks": dict(zip(map(str, rep.T_list), rep.ks)), "remainder": rep.remainder_diagnostic}
    print("convergence KS: " + ", ".join(f"T={fmt(T)}: {k:.4f}" for T, k in zip(rep.T_list, rep.ks)))
    return stats


def _cmd_phase_sweep(cfg, outdir):
    zeta_list = cfg.get("zeta_list", [0.2, 0.35, 0.5, 0.65, 0.8])
    T_list = cfg.get("T_list", [50.0, 100.0, 200.0, 400.0])
    rep = phase_sweep(cfg["alpha"], zeta_list, T_list, cfg["reps"], cfg["seed"])
    rows = []
    for z in rep.zeta_list:
        for T in rep.T_list:
            q1, q3 = rep.iqr[(z, T)]
            rows.append((z, T, float(T) ** (-z), rep.medians[(z, T)], q1, q3, rep.reps))
    write_csv(os.path.join(outdir, "sweep.csv"), "zeta,T,p,median,q1,q3,reps", rows)
    write_csv(os.path.join(outdir, "slopes.csv"), "zeta,slope,ci_lo,ci_hi",
              [(z, rep.slopes[z], *rep.slope_ci[z]) for z in rep.zeta_list])
    stats = {"slopes": {str(z): rep.slopes[z] for z in rep.zeta_list}}
    print("phase-sweep slopes: " + ", ".join(f"zeta={z}: {rep.slopes[z]:+.3f}" for z in rep.zeta_list))
    return stats


def _cmd_bbd(cfg, outdir):
    zeta = cfg.get("zeta", 0.0)
    sigma_list = cfg.get("sigma_list", [cfg.get("sigma", 1.0)])
    T_list = cfg.get("T_list", [10.0, 31.6227766016838, 100.0])
    rows, cells = [], []
    for sigma in sigma_list:
        for T in T_list:
            c = BbdConfig.from_zeta(sigma, zeta, T, reps=cfg["reps"])
            hs = np.array([
                bbd_height(derive_seed(cfg["seed"], f"bbd-s{sigma}-T{T}", r), c)
                for r in range(cfg["reps"])
            ])
            rows += [(sigma, c.p, T, zeta, r, float(h)) for r, h in enumerate(hs)]
            cells.append((sigma, c.p, T, float(hs.mean())))
    write_csv(os.path.join(outdir, "bbd.csv"), "sigma,p,T,zeta,rep,height", rows)
    stats = {"cells": [{"sigma": s, "p": p, "T": T, "mean_height": m} for s, p, T, m in cells]}
    try:
        stats["exponent"] = scaling_exponent(cells)
        print(f"bbd: fitted exponent {stats['exponent']:.4f} over {len(cells)} cells")
    except ValueError as e:
        print(f"bbd: exponent not fitted ({e})")
    return stats


def _cmd_moments(cfg, outdir):
    p_list = [cfg.get("p", 1.0)]
    T_list = cfg.get("T_list", [10.0])
    table = moment_check(p_list, T_list, cfg["reps"], cfg["seed"])
    hdr = ("p,T,reps,interior_mean,interior_se,interior_target,"
           "boundary_mean,boundary_se,boundary_target,split_mean,split_se,split_target")
    write_csv(os.path.join(outdir, "moments.csv"), hdr,
              [tuple(row[k] for k in hdr.split(",")) for row in table])
    for row in table:
        print(f"moments p={fmt(row['p'])} T={fmt(row['T'])}: "
              f"interior {row['interior_mean']:.4f} (target {row['interior_target']:.4f}), "
              f"boundary {row['boundary_mean']:.4f} (target {row['boundary_target']:.4f})")
    return {"table": table}


def _cmd_continuous_sample(cfg, outdir):
    rng = np.random.default_rng(derive_seed(cfg["seed"], "continuous", 0))
    pts = sample_points(cfg["k"], cfg["alpha"], rng)
    write_csv(os.path.join(outdir, "points.csv"), "x,t,m", [(p.x, p.t, p.m) for p in pts])
    values = [h_k(pts).value]
    for r in range(1, cfg["reps"]):
        rng_r = np.random.default_rng(derive_seed(cfg["seed"], "continuous", r))
        values.append(h_k(sample_points(cfg["k"], cfg["alpha"], rng_r)).value)
    write_csv(os.path.join(outdir, "hsample.csv"), "replicate,k,value",
              [(r, cfg["k"], v) for r, v in enumerate(values)])
    rem = remainder_estimate(cfg["alpha"], cfg["k"] + 1, 2 * cfg["k"],
                             np.random.default_rng(derive_seed(cfg["seed"], "continuous-rem", 0)))
    print(f"continuous-sample: k={cfg['k']}, value={values[0]:.6g}, tail diagnostic {rem:.6g}")
    return {"value": values[0], "remainder": rem}


def _cmd_rd_check(cfg, outdir):
    T_list = cfg.get("T_list", [100.0, 1000.0])
    pairs = rd_limit_check(cfg["alpha"], T_list, cfg["reps"], cfg["seed"])
    write_csv(os.path.join(outdir, "rd.csv"), "T_lo,T_hi,ks",
              [(a, b, k) for (a, b), k in pairs])
    print("rd-check KS: " + ", ".join(f"({fmt(a)},{fmt(b)}): {k:.4f}" for (a, b), k in pairs))
    return {"ks": {f"{a}-{b}": k for (a, b), k in pairs}}


_DISPATCH = {
    "forward": _cmd_forward,
    "height": _cmd_height,
    "convergence": _cmd_convergence,
    "phase-sweep": _cmd_phase_sweep,
    "bbd": _cmd_bbd,
    "moments": _cmd_moments,
    "continuous-sample": _cmd_continuous_sample,
    "rd-check": _cmd_rd_check,
}


def run_config(cfg):
    outdir = cfg["out"]
    os.makedirs(outdir, exist_ok=True)
    stats = _DISPATCH[cfg["experiment"]](cfg, outdir)
    _summary(cfg, stats, outdir)
    return 0


def main(argv=None):
    try:
        cfg = parse_config(argv)
    except (ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        return run_config(cfg)
    except (OverflowError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
