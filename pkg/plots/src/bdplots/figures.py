"""Figure kinds and the render dispatcher.

Every kind validates its input header against the documented schema before
drawing and fails loudly (naming expected vs found) on mismatch.  Rendering
is deterministic: fixed figure geometry, no timestamps, data drawn exactly
as read.
"""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "bdplots"  # deterministic SVG ids

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import PatchCollection
from matplotlib.patches import Rectangle

__all__ = ["FigureSpec", "RenderResult", "render", "EXPECTED_HEADERS"]

EXPECTED_HEADERS = {
    "interface": "site,time,base,top,sticky",
    "ecdf-overlay": "rep,T,p,alpha,height,normalized",
    "loglog-sweep": "zeta,T,p,median,q1,q3,reps",
    "moments": (
        "p,T,reps,interior_mean,interior_se,interior_target,"
        "boundary_mean,boundary_se,boundary_target,split_mean,split_se,split_target"
    ),
}

KINDS = tuple(EXPECTED_HEADERS)


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple
    kind: str
    output: str
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


@dataclass(frozen=True)
class RenderResult:
    path: str
    width_px: int
    height_px: int
    n_series: int
    n_rows: int


def _read_csv(path, kind):
    expected = EXPECTED_HEADERS[kind]
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file; expected header {expected!r}")
        found = ",".join(header)
        if found != expected:
            raise ValueError(f"{path}: schema mismatch; expected header {expected!r}, found {found!r}")
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: no data rows under header {expected!r}")
    cols = {name: np.array([row[i] for row in rows]) for i, name in enumerate(header)}
    return cols


def _as_float(col):
    return np.asarray(col, dtype=float)


def _save(fig, output, style):
    dpi = int(style.get("dpi", 120))
    meta = {"Date": None} if output.lower().endswith(".svg") else None
    os.makedirs(os.path.dirname(os.path.abspath(output)), exist_ok=True)
    fig.savefig(output, dpi=dpi, metadata=meta)
    w, h = fig.get_size_inches() * dpi
    plt.close(fig)
    return int(round(w)), int(round(h))


def _render_interface(spec):
    cols = _read_csv(spec.inputs[0], "interface")
    site = _as_float(cols["site"])
    time = _as_float(cols["time"])
    base = _as_float(cols["base"])
    top = _as_float(cols["top"])
    # one rectangle per block, [site - 1/2, site + 1/2] x [base, top];
    # overhangs (base above the previous column top) are drawn as-is
    patches = [
        Rectangle((s - 0.5, b), 1.0, t - b) for s, b, t in zip(site, base, top)
    ]
    fig, ax = plt.subplots(figsize=(10.0, 5.0))
    coll = PatchCollection(patches, cmap=spec.style.get("cmap", "viridis"), linewidth=0.0)
    coll.set_array(time)
    ax.add_collection(coll)
    ax.set_xlim(site.min() - 1.0, site.max() + 1.0)
    ax.set_ylim(0.0, float(top.max()) * 1.02)
    ax.set_xlabel("site")
    ax.set_ylabel("height")
    fig.colorbar(coll, ax=ax, label="deposition time")
    w, h = _save(fig, spec.output, spec.style)
    return RenderResult(spec.output, w, h, 1, len(site))


def _render_ecdf_overlay(spec):
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    total = 0
    for path in spec.inputs:
        cols = _read_csv(path, "ecdf-overlay")
        vals = np.sort(_as_float(cols["normalized"]))
        ys = np.arange(1, len(vals) + 1) / len(vals)
        label = f"{os.path.basename(path)} (T={cols['T'][0]})"
        ax.step(vals, ys, where="post", label=label)
        total += len(vals)
    ax.set_xlabel("normalized height")
    ax.set_ylabel("empirical CDF")
    ax.legend()
    w, h = _save(fig, spec.output, spec.style)
    return RenderResult(spec.output, w, h, len(spec.inputs), total)


def _render_loglog_sweep(spec):
    cols = _read_csv(spec.inputs[0], "loglog-sweep")
    zeta = _as_float(cols["zeta"])
    T = _as_float(cols["T"])
    med = _as_float(cols["median"])
    q1 = _as_float(cols["q1"])
    q3 = _as_float(cols["q3"])
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    series = 0
    for z in np.unique(zeta):
        sel = zeta == z
        order = np.argsort(T[sel])
        ax.errorbar(
            T[sel][order], med[sel][order],
            yerr=[med[sel][order] - q1[sel][order], q3[sel][order] - med[sel][order]],
            marker="o", capsize=3, label=f"zeta={z:g}",
        )
        series += 1
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel("median normalized height")
    ax.legend()
    w, h = _save(fig, spec.output, spec.style)
    return RenderResult(spec.output, w, h, series, len(T))


def _render_moments(spec):
    cols = _read_csv(spec.inputs[0], "moments")
    labels = [f"p={p},T={t}" for p, t in zip(cols["p"], cols["T"])]
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 4.0))
    for ax, kind in zip(axes, ("interior", "boundary", "split")):
        mean = _as_float(cols[f"{kind}_mean"])
        se = _as_float(cols[f"{kind}_se"])
        target = _as_float(cols[f"{kind}_target"])
        xs = np.arange(len(mean))
        ax.errorbar(xs, mean, yerr=3.0 * se, fmt="o", label="empirical (3 SE)")
        ax.plot(xs, target, "k_", markersize=18, label="closed form")
        ax.set_xticks(xs, labels, rotation=30, fontsize=8)
        ax.set_title(kind)
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    w, h = _save(fig, spec.output, spec.style)
    return RenderResult(spec.output, w, h, 3, len(labels))


_RENDERERS = {
    "interface": _render_interface,
    "ecdf-overlay": _render_ecdf_overlay,
    "loglog-sweep": _render_loglog_sweep,
    "moments": _render_moments,
}


def render(spec):
    """Validate inputs and write the figure; returns a RenderResult.

    Raises before any file is written when a schema does not match, so a
    failed render never leaves a partial image behind.
    """
    return _RENDERERS[spec.kind](spec)
