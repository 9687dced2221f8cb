"""Backward propagation cone and the reversed last-passage evaluation of h(0, T).

The origin's height at time T is the maximum, over nearest-neighbor paths that
end at the origin and may relocate only at sticky events of their destination
site, of the summed block heights collected along the way.  A backward sweep
from (0, T) delimits the region such paths can reach: two boundary jump
processes of rate p that share their first jump and then evolve independently.
Events inside that region are the attainable points; a single reversed dynamic
program over them, in decreasing time, evaluates the maximum exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dists import sample_height
from .field import as_field

__all__ = ["Cone", "AttainableSet", "build_cone", "attainable", "lpp_height", "max_collect_count"]

_NEG = float("-inf")


@dataclass(frozen=True)
class Cone:
    """Backward-time jump records of the two extreme compatible paths.

    right_jumps[i] is the backward time at which the reversed rightmost path
    steps from site i to i+1 (left_jumps mirrored to negative sites).  While
    the two paths coincide there are no jumps; split_time is the backward
    time of the shared first jump, or T when no sticky event frees them.
    """

    right_jumps: np.ndarray
    left_jumps: np.ndarray
    split_time: float
    horizon: float

    @property
    def site_range(self):
        return -len(self.left_jumps), len(self.right_jumps)

    def right_boundary_at(self, t):
        """Rightmost reachable site at forward time t (jump events lie on the boundary)."""
        return int(np.searchsorted(self.right_jumps, self.horizon - np.asarray(t), side="left"))

    def left_boundary_at(self, t):
        return -int(np.searchsorted(self.left_jumps, self.horizon - np.asarray(t), side="left"))

    def to_csv(self, path):
        from .csvio import write_csv

        rows = [(s, "right") for s in self.right_jumps.tolist()]
        rows += [(s, "left") for s in self.left_jumps.tolist()]
        rows.sort(key=lambda r: (r[0], r[1]))
        write_csv(path, "backward_time,side", rows)


def _latest_sticky_before(stream, p, t_cut):
    """Largest sticky event time strictly below t_cut in one site stream, or None.

    Scans downward from the cut; the expected number of events inspected
    before a sticky one is 1/p, so the scan is cheap at every p.
    """
    times = stream.times
    u = stream.u_sticky
    j = int(times.searchsorted(t_cut, side="left")) - 1
    while j >= 0 and u[j] >= p:
        j -= 1
    if j < 0:
        return None
    return float(times[j])


def build_cone(seed, T, p):
    """Backward sweep from (0, T) producing the propagation cone.

    The interval of reachable sites starts as {0}; a sticky event at the
    current right edge pushes it one site right (left mirrored), and while
    the edges coincide a single sticky event at the shared site moves both.
    """
    if not T > 0.0:
        raise ValueError(f"T must be > 0, got {T}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    fld = as_field(seed, T)

    t_split = _latest_sticky_before(fld.stream(0), p, T)
    if t_split is None:
        return Cone(
            right_jumps=np.empty(0),
            left_jumps=np.empty(0),
            split_time=float(T),
            horizon=float(T),
        )
    split = T - t_split

    def sweep(direction):
        jumps = [split]
        site = direction
        t_cur = t_split
        while True:
            t_next = _latest_sticky_before(fld.stream(site), p, t_cur)
            if t_next is None:
                break
            jumps.append(T - t_next)
            site += direction
            t_cur = t_next
        return np.asarray(jumps)

    return Cone(
        right_jumps=sweep(+1),
        left_jumps=sweep(-1),
        split_time=split,
        horizon=float(T),
    )


@dataclass
class AttainableSet:
    """Field events reachable by some compatible path ending at (0, T).

    Stored columnwise; boundary flags mark events lying on an extreme path
    (counted once where the two extreme paths coincide).
    """

    sites: np.ndarray
    times: np.ndarray
    sticky: np.ndarray
    eta: np.ndarray
    is_boundary: np.ndarray
    cone: Cone

    @property
    def n_boundary(self):
        return int(self.is_boundary.sum())

    @property
    def n_interior(self):
        return int(len(self.sites) - self.is_boundary.sum())

    def __len__(self):
        return len(self.sites)

    def to_csv(self, path):
        from .csvio import write_csv

        rows = list(zip(self.sites.tolist(), self.times.tolist(), self.sticky.tolist(),
                        self.eta.tolist(), self.is_boundary.tolist()))
        rows.sort(key=lambda r: (r[1], r[0]))
        write_csv(path, "site,time,sticky,eta,is_boundary", rows)


def attainable(cone, seed, p, dist):
    """Collect and mark every field event inside the cone.

    An event (x, t) is attainable when the forward-time cone section at t
    contains x; it is a boundary point when x equals an extreme path position.
    """
    T = cone.horizon
    fld = as_field(seed, T)
    lo, hi = cone.site_range
    streams = [fld.stream(x) for x in range(lo, hi + 1)]
    lens = [len(s) for s in streams]
    if sum(lens) == 0:
        empty = np.empty(0)
        return AttainableSet(empty.astype(int), empty, empty.astype(bool), empty,
                             empty.astype(bool), cone)
    sites = np.repeat(np.arange(lo, hi + 1), lens)
    times = np.concatenate([s.times for s in streams])
    u_sticky = np.concatenate([s.u_sticky for s in streams])
    u_height = np.concatenate([s.u_height for s in streams])
    back = T - times
    g_plus = np.searchsorted(cone.right_jumps, back, side="left")
    g_minus = -np.searchsorted(cone.left_jumps, back, side="left")
    inside = (g_minus <= sites) & (sites <= g_plus)
    boundary = (sites == g_plus) | (sites == g_minus)
    return AttainableSet(
        sites=sites[inside],
        times=times[inside],
        sticky=u_sticky[inside] < p,
        eta=np.asarray(sample_height(dist, u_height[inside]), dtype=float),
        is_boundary=boundary[inside],
        cone=cone,
    )


def _reversed_dp(att, weights):
    """Shared reversed dynamic program; returns the best terminal value.

    State B[x] is the best weight a reversed path sitting at x has collected,
    -inf where unreachable.  Points are visited in decreasing forward time;
    a path at the event site collects the event's weight and, at a sticky
    event, may relocate to either neighbor carrying its value (the forward
    picture: a path jumping onto a sticky point collects that point's mark).
    """
    n = len(att)
    lo, hi = att.cone.site_range
    off = 1 - lo
    B = [_NEG] * (hi - lo + 3)
    B[off] = 0.0
    if n:
        order = np.lexsort((att.sites, -att.times))
        xs = (att.sites[order] + off).tolist()
        st = att.sticky[order].tolist()
        ws = np.asarray(weights, dtype=float)[order].tolist()
        for i, s, w in zip(xs, st, ws):
            b = B[i]
            if b == _NEG:
                continue
            b += w
            B[i] = b
            if s:
                if b > B[i - 1]:
                    B[i - 1] = b
                if b > B[i + 1]:
                    B[i + 1] = b
    return max(B)


def lpp_height(att):
    """Exact h(0, T): maximum summed height over compatible paths (flat start)."""
    out = _reversed_dp(att, att.eta)
    if out == float("inf"):
        raise OverflowError("path weight overflowed to +inf")
    return out


def max_collect_count(att, selected):
    """Maximum number of the selected attainable points one compatible path collects.

    `selected` is an index array (or boolean mask) into the attainable set;
    unselected points keep weight zero but sticky ones still allow relocation.
    """
    w = np.zeros(len(att))
    w[selected] = 1.0
    return int(_reversed_dp(att, w))
