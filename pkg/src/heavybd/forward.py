"""Forward-in-time interface dynamics under the two deposition rules.

A non-sticky block stacks on its own column; a sticky block lands on the
highest of the three neighboring columns.  Runs happen on a torus (for
pictures) or on a free finite window; window runs are exact for the origin
column whenever the backward propagation cone fits strictly inside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import as_field, resolve_marks

__all__ = ["Torus", "Window", "Interface", "BlockLog", "apply_event", "run", "window_is_exact"]


@dataclass(frozen=True)
class Torus:
    L: int

    def __post_init__(self):
        if self.L < 3:
            raise ValueError(f"torus needs at least 3 sites, got L={self.L}")

    def sites(self):
        return range(self.L)

    def index(self, site):
        return site % self.L

    def neighbors(self, site):
        return ((site - 1) % self.L, (site + 1) % self.L)


@dataclass(frozen=True)
class Window:
    lo: int
    hi: int

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")

    def sites(self):
        return range(self.lo, self.hi + 1)

    def index(self, site):
        if not self.lo <= site <= self.hi:
            raise IndexError(f"site {site} outside window [{self.lo}, {self.hi}]")
        return site - self.lo

    def neighbors(self, site):
        out = []
        if site - 1 >= self.lo:
            out.append(site - 1)
        if site + 1 <= self.hi:
            out.append(site + 1)
        return tuple(out)


@dataclass
class Interface:
    """Height configuration h(., t) over a finite geometry; starts flat at 0."""

    geometry: Torus | Window
    heights: np.ndarray
    clock: float = 0.0

    @classmethod
    def flat(cls, geometry):
        n = geometry.L if isinstance(geometry, Torus) else geometry.hi - geometry.lo + 1
        return cls(geometry=geometry, heights=np.zeros(n, dtype=float))

    def height(self, site):
        return float(self.heights[self.geometry.index(site)])


@dataclass
class BlockLog:
    """Per-block deposition records (site, time, base, top, sticky) plus run metadata."""

    geometry: Torus | Window
    horizon: float
    records: list = dc_field(default_factory=list)

    def to_csv(self, path):
        from .csvio import write_csv

        write_csv(path, "site,time,base,top,sticky", self.records)


def apply_event(intf, site, eta, sticky):
    """Apply one deposition to the interface in place; returns (interface, base, top)."""
    g = intf.geometry
    i = g.index(site)
    h = intf.heights
    if sticky:
        base = max(h[g.index(n)] for n in g.neighbors(site))
        base = max(base, h[i])
    else:
        base = h[i]
    top = base + eta
    if math.isinf(top):
        raise OverflowError("interface height overflowed to +inf")
    h[i] = top
    return intf, float(base), float(top)


def run(seed, geometry, T, p, dist):
    """Replay every field event on the geometry in global time order.

    Returns the interface at time T and the complete block log.  Ordering is
    by (time, site); distinct events share a time only as a float-resolution
    null event, which the tie-break resolves deterministically.
    """
    if not T > 0.0:
        raise ValueError(f"T must be > 0, got {T}")
    fld = as_field(seed, T)
    streams = [fld.stream(x) for x in geometry.sites()]
    times = np.concatenate([s.times for s in streams]) if streams else np.empty(0)
    sites = np.concatenate([np.full(len(s), s.site) for s in streams]) if streams else np.empty(0, int)
    u_st = np.concatenate([s.u_sticky for s in streams]) if streams else np.empty(0)
    u_ht = np.concatenate([s.u_height for s in streams]) if streams else np.empty(0)
    order = np.lexsort((sites, times))

    from .dists import sample_height

    etas = sample_height(dist, u_ht[order]) if len(order) else np.empty(0)
    stickies = u_st[order] < p

    intf = Interface.flat(geometry)
    log = BlockLog(geometry=geometry, horizon=T)
    for j, (x, t) in enumerate(zip(sites[order].tolist(), times[order].tolist())):
        _, base, top = apply_event(intf, int(x), float(etas[j]), bool(stickies[j]))
        log.records.append((int(x), float(t), base, top, bool(stickies[j])))
    intf.clock = T
    return intf, log


def window_is_exact(log, cone):
    """True when the cone sites sit strictly inside the window of a run.

    Then the windowed h(0, T) coincides with the infinite-lattice value: the
    origin's value is a function of the attainable marks only, all of which
    the window generated identically.  Torus runs never claim exactness.
    """
    if not isinstance(log.geometry, Window):
        return False
    lo_c, hi_c = cone.site_range
    return log.geometry.lo < lo_c and hi_c < log.geometry.hi
