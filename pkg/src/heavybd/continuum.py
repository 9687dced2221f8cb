"""Continuous last-passage limit: weighted points in the triangle and the chain value.

Atoms (U_i, M_i) carry the k largest limit weights at uniform positions in the
triangle of 1-Lipschitz reachability below the apex (0, 1).  The truncated
limit value is the maximum total weight of a pairwise-compatible subset, a
maximum-weight chain under the Lipschitz partial order; a 135-degree rotation
turns that order into coordinatewise dominance on the half square.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dists import weight_sequence

__all__ = [
    "WeightedPoint",
    "ChainResult",
    "sample_points",
    "compatible",
    "rotate",
    "h_k",
    "remainder_estimate",
]


@dataclass(frozen=True)
class WeightedPoint:
    x: float
    t: float
    m: float

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0 or abs(self.x) > 1.0 - self.t + 1e-15:
            raise ValueError(f"point ({self.x}, {self.t}) outside the triangle")
        if not self.m > 0.0:
            raise ValueError("weight must be positive")


@dataclass(frozen=True)
class ChainResult:
    value: float
    argset: tuple


def sample_points(k, alpha, rng):
    """k weighted atoms: positions uniform on the triangle, weights from the limit law.

    Time uses the inverse transform for the marginal density 2(1-t); space is
    then uniform on [-(1-t), 1-t].  Rejection-free and exactly uniform.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    t = 1.0 - np.sqrt(1.0 - rng.random(k))
    x = (2.0 * rng.random(k) - 1.0) * (1.0 - t)
    m = weight_sequence(k, alpha, rng).m
    return [WeightedPoint(float(xi), float(ti), float(mi)) for xi, ti, mi in zip(x, t, m)]


# float guard for exact-boundary pairs (|dx| == |dt| up to representation);
# coordinates live in [-1, 1], so an absolute tolerance is appropriate
_EDGE_TOL = 1e-12


def compatible(a, b):
    """Whether one 1-Lipschitz path can pass through both points.

    Space gap at most time gap; with equal times only identical points
    qualify (the zero-gap case of the same inequality).
    """
    return abs(a.x - b.x) <= abs(a.t - b.t) + _EDGE_TOL


def rotate(pt):
    """Rotate-and-scale a triangle point onto the half unit square.

    Order isomorphism: for t_b <= t_a, compatible(a, b) holds exactly when
    rotate(b) dominates rotate(a) coordinatewise.
    """
    x, t = pt
    return (0.5 * (1.0 - x - t), 0.5 * (1.0 + x - t))


def _chain_value(x, t, m):
    """Max-weight chain over columns (x, t, m); returns (value, argset indices)."""
    n = len(x)
    order = np.argsort(t, kind="stable")
    xs, ts, ms = x[order], t[order], m[order]
    if np.any(np.diff(ts) == 0.0):
        raise ValueError("duplicate time coordinates; chain value undefined on ties")
    best = np.empty(n)
    parent = np.full(n, -1, dtype=int)
    for i in range(n):
        best[i] = ms[i]
        if i:
            ok = np.abs(xs[:i] - xs[i]) <= (ts[i] - ts[:i]) + _EDGE_TOL
            if ok.any():
                cand = np.where(ok)[0]
                j = cand[np.argmax(best[cand])]
                if best[j] > 0.0:
                    best[i] = ms[i] + best[j]
                    parent[i] = j
    top = int(np.argmax(best))
    chain = []
    while top != -1:
        chain.append(int(order[top]))
        top = parent[top]
    return float(best.max()) if n else 0.0, tuple(sorted(chain))


def h_k(points):
    """Truncated limit value: maximum total weight of a pairwise-compatible subset.

    Sorting by time reduces the search to chains with compatible consecutive
    links (gaps telescope, so consecutive compatibility is pairwise), every
    one of which extends to a path reaching the apex since all points lie in
    the triangle.
    """
    if not points:
        return ChainResult(0.0, ())
    x = np.array([p.x for p in points])
    t = np.array([p.t for p in points])
    m = np.array([p.m for p in points])
    value, argset = _chain_value(x, t, m)
    return ChainResult(value=value, argset=argset)


def remainder_estimate(alpha, k, K, rng):
    """Chain value of a K-point sample restricted to weights of rank >= k.

    A lower bound on the tail value beyond rank k-1 and the convergence
    diagnostic reported next to the rank-k truncation; rank 1 recovers the
    full-sample value, and an empty restriction (k > K) gives 0.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    pts = sample_points(K, alpha, rng)
    tail = pts[k - 1:]
    if not tail:
        return 0.0
    return h_k(tail).value
