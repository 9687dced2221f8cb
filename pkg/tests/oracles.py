"""Independent brute-force oracles used to pin the dynamic programs.

These deliberately avoid the production algorithms: the path oracle walks the
reversed path space by explicit recursion over relocation choices, and the
subset oracle enumerates every subset with bitmasks.
"""
import numpy as np


def brute_path_value(att, weights=None):
    """Maximum collected weight over all reversed compatible paths, by DFS.

    Explores every relocation choice at every sticky event reached; feasible
    only for small attainable sets (a few sticky events).
    """
    w = att.eta if weights is None else np.asarray(weights, dtype=float)
    order = np.lexsort((att.sites, -att.times))
    pts = list(zip(att.sites[order].tolist(), att.sticky[order].tolist(), w[order].tolist()))
    best = -np.inf

    def rec(i, x, acc):
        nonlocal best
        if i == len(pts):
            best = max(best, acc)
            return
        site, sticky, wt = pts[i]
        if site == x:
            if sticky:
                for nx in (x - 1, x, x + 1):
                    rec(i + 1, nx, acc + wt)
            else:
                rec(i + 1, x, acc + wt)
        else:
            rec(i + 1, x, acc)

    rec(0, 0, 0.0)
    return best


def brute_chain_value(points):
    """Maximum-weight pairwise-compatible subset by full bitmask enumeration."""
    n = len(points)
    if n == 0:
        return 0.0
    if n > 16:
        raise ValueError("bitmask oracle is for small instances")
    bad = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j:
                dx = abs(points[i].x - points[j].x)
                dt = abs(points[i].t - points[j].t)
                if dx > dt + 1e-12:  # same edge guard as the production predicate
                    bad[i] |= 1 << j
    best = 0.0
    valid = np.zeros(1 << n, dtype=bool)
    total = np.zeros(1 << n)
    valid[0] = True
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        if valid[rest] and not (bad[low] & rest):
            valid[mask] = True
            total[mask] = total[rest] + points[low].m
            if total[mask] > best:
                best = total[mask]
    return best
