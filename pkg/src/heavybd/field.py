"""Reproducible marked Poisson field of falling blocks on Z x [0, T].

Every site owns an independent unit-rate stream of event times, each event
carrying two retained uniforms: one deciding stickiness against the sticking
parameter p, one feeding the height inverse CDF.  Streams are derived from a
keyed counter RNG so that any consumer (forward replay, backward cone, lazy
site-by-site growth) reconstructs the identical realization from the master
seed alone.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field

import numpy as np

from .dists import sample_height

__all__ = [
    "FieldSeed",
    "DepositionEvent",
    "SiteStream",
    "EventField",
    "site_stream",
    "resolve_marks",
    "dump_events_csv",
]

_MASK64 = (1 << 64) - 1


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _mix(*words):
    h = 0x243F6A8885A308D3
    for w in words:
        h = _splitmix64(h ^ (w & _MASK64))
    return h


@dataclass(frozen=True)
class FieldSeed:
    """Master seed; per-site streams are keyed by hashing (master_seed, site)."""

    master_seed: int

    def philox_key(self, site):
        hi = _mix(self.master_seed, site & _MASK64, 0x5174)
        lo = _mix(self.master_seed, site & _MASK64, 0xD0E5)
        return (hi << 64) | lo


@dataclass(frozen=True)
class DepositionEvent:
    site: int
    time: float
    u_sticky: float
    u_height: float


@dataclass
class SiteStream:
    """Time-ordered events of one site on [0, T]; arrays are the primary storage."""

    site: int
    times: np.ndarray
    u_sticky: np.ndarray
    u_height: np.ndarray

    @property
    def events(self):
        return [
            DepositionEvent(self.site, float(t), float(a), float(b))
            for t, a, b in zip(self.times, self.u_sticky, self.u_height)
        ]

    def __len__(self):
        return len(self.times)


class _Scratch(threading.local):
    """Per-thread reusable Philox generator; rekeying avoids construction cost."""

    def __init__(self):
        self.philox = np.random.Philox(key=0)
        self.gen = np.random.Generator(self.philox)
        self.counter = np.zeros(4, dtype=np.uint64)
        self.key = np.zeros(2, dtype=np.uint64)
        self.template = dict(self.philox.state)
        self.template["state"] = {"counter": self.counter, "key": self.key}
        self.template["buffer_pos"] = 4
        self.template["has_uint32"] = 0
        self.template["uinteger"] = 0


_scratch = _Scratch()


def _keyed_generator(key128):
    sc = _scratch
    sc.counter[:] = 0
    sc.key[0] = key128 & _MASK64
    sc.key[1] = key128 >> 64
    sc.philox.state = sc.template
    return sc.gen


def site_stream(seed, site, horizon):
    """Generate the unit-rate event stream of one site on [0, horizon].

    Pure in (seed, site, horizon): repeated calls are bitwise identical.
    Uniforms are consumed three per event (gap, u_sticky, u_height), in
    chunks whose boundaries do not affect the underlying bit stream.
    """
    if not horizon > 0.0:
        raise ValueError(f"horizon must be > 0, got {horizon}")
    if isinstance(seed, int):
        seed = FieldSeed(seed)
    key = seed.philox_key(site)
    rng = _keyed_generator(key)

    n = max(8, int(horizon + 6.0 * horizon ** 0.5) + 8)
    parts = []
    t_off = 0.0
    degenerate = False
    while True:
        u = rng.random(3 * n)
        gaps = -np.log1p(-u[0::3])
        # one reduction guards both zero uniforms and float-resolution time
        # collisions (cumsum cannot stall when every gap clears the threshold)
        if u.min() <= 0.0 or gaps.min() < 4e-12 * max(1.0, horizon):
            degenerate = True
            break
        t = t_off + np.cumsum(gaps)
        cut = int(t.searchsorted(horizon, side="right"))
        parts.append((t[:cut], u[1::3][:cut], u[2::3][:cut]))
        if cut < n:
            break
        t_off = float(t[-1])
        n = 8
    if degenerate:
        return _site_stream_scalar(key, site, horizon)
    if len(parts) > 1:
        times = np.concatenate([p[0] for p in parts])
        us = np.concatenate([p[1] for p in parts])
        uh = np.concatenate([p[2] for p in parts])
    else:
        times, us, uh = parts[0]
    return SiteStream(site=site, times=times, u_sticky=us, u_height=uh)


def _site_stream_scalar(key, site, horizon):
    """Collision-redrawing fallback; pure in (key, horizon), a.s. never taken."""
    rng = np.random.Generator(np.random.Philox(key=key))
    times, us, uh = [], [], []
    t_last = 0.0
    while True:
        g, a, b = rng.random(3)
        t = t_last - np.log1p(-g)
        while t <= t_last or a <= 0.0 or b <= 0.0:
            g, a, b = rng.random(3)
            t = t_last - np.log1p(-g)
        if t > horizon:
            break
        times.append(t)
        us.append(a)
        uh.append(b)
        t_last = t
    return SiteStream(
        site=site,
        times=np.asarray(times, dtype=float),
        u_sticky=np.asarray(us, dtype=float),
        u_height=np.asarray(uh, dtype=float),
    )


@dataclass
class EventField:
    """Memoizing view of the field at one (seed, horizon); streams generated on demand."""

    seed: FieldSeed
    horizon: float
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def stream(self, site):
        s = self._cache.get(site)
        if s is None:
            s = site_stream(self.seed, site, self.horizon)
            self._cache[site] = s
        return s


def as_field(seed_or_field, horizon):
    """Normalize an int / FieldSeed / EventField argument to an EventField."""
    if isinstance(seed_or_field, EventField):
        if seed_or_field.horizon != horizon:
            raise ValueError("EventField horizon does not match the requested horizon")
        return seed_or_field
    if isinstance(seed_or_field, int):
        seed_or_field = FieldSeed(seed_or_field)
    return EventField(seed=seed_or_field, horizon=horizon)


def resolve_marks(ev, p, dist):
    """Turn retained uniforms into the (sticky, height) mark pair.

    Stickiness is monotone in p under the shared uniform: for p1 < p2 the
    sticky event sets are nested.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return ev.u_sticky < p, sample_height(dist, ev.u_height)


def dump_events_csv(path, seed, sites, horizon):
    """Write site,time,u_sticky,u_height rows for the given sites (debug/golden use)."""
    from .csvio import write_csv

    fld = as_field(seed, horizon)
    rows = []
    for x in sites:
        s = fld.stream(x)
        for t, a, b in zip(s.times, s.u_sticky, s.u_height):
            rows.append((x, t, a, b))
    rows.sort(key=lambda r: (r[1], r[0]))
    write_csv(path, "site,time,u_sticky,u_height", rows)
