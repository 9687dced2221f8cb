"""Top-level experiments: limit convergence, phase transition, independent-column
limit self-consistency, and the cone moment checks.

Every experiment is a pure function of (config, master seed): replicate r of
experiment `name` draws its field from derive_seed(master, name, r), so shards
merge associatively and reruns reproduce identical outputs byte for byte.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .cone import attainable, build_cone, lpp_height
from .continuum import h_k, remainder_estimate, sample_points
from .dists import Pareto, a_scale, c_centering, sample_height
from .field import FieldSeed, _mix, as_field
from .stats import Ecdf, bootstrap_median_slope_ci, ks_distance, loglog_slope, standard_error

__all__ = [
    "zeta_critical",
    "derive_seed",
    "replicate_map",
    "discrete_height",
    "discrete_heights",
    "ConvergenceReport",
    "convergence_experiment",
    "SweepReport",
    "phase_sweep",
    "rd_heights",
    "rd_limit_check",
    "moment_check",
]


def zeta_critical(alpha):
    """Critical vanishing-sticking exponent: below it the sticking limit persists."""
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in the open interval (0, 2), got {alpha}")
    return min(2.0 - alpha, 1.0)


def derive_seed(master, experiment_id, r):
    """Deterministic 64-bit replicate seed from (master, experiment label, index)."""
    import hashlib

    tag = int.from_bytes(hashlib.blake2b(experiment_id.encode(), digest_size=8).digest(), "big")
    return _mix(master, tag, r)


def _n_workers():
    return max(1, int(os.environ.get("HEAVYBD_THREADS", "1")))


def replicate_map(fn, args):
    """Order-preserving map over replicate arguments, threaded when configured."""
    w = _n_workers()
    if w == 1:
        return [fn(a) for a in args]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, args))


def discrete_height(seed, T, p, dist):
    """One backward evaluation of h(0, T) from a replicate seed."""
    fld = as_field(FieldSeed(seed), T)
    cone = build_cone(fld, T, p)
    att = attainable(cone, fld, p, dist)
    return lpp_height(att)


def discrete_heights(master, label, T, p, dist, reps):
    seeds = [derive_seed(master, label, r) for r in range(reps)]
    return np.asarray(replicate_map(lambda s: discrete_height(s, T, p, dist), seeds))


def _hk_sample(master, label, alpha, k, reps):
    out = np.empty(reps)
    for r in range(reps):
        rng = np.random.default_rng(derive_seed(master, label, r))
        out[r] = h_k(sample_points(k, alpha, rng)).value
    return out


@dataclass
class ConvergenceReport:
    alpha: float
    p: float
    k: int
    reps: int
    T_list: list
    ks: list
    remainder_diagnostic: float
    heights: dict = dc_field(default_factory=dict)
    reference: np.ndarray | None = None


def convergence_experiment(alpha, p, T_list, reps, k, seed):
    """KS distance between normalized origin heights and the rank-k truncated limit.

    Heights are normalized by the scale of the largest of p*T^2 draws; the
    reference sample is reps draws of the truncated limit value.  A tail
    diagnostic (median rank-(k+1) remainder on a 2k-point sample) quantifies
    what the truncation leaves out.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if list(T_list) != sorted(T_list):
        raise ValueError("T_list must be increasing")
    dist = Pareto(alpha)
    ref = _hk_sample(seed, "conv-ref", alpha, k, reps)
    ref_ecdf = Ecdf.from_sample(ref)
    ks = []
    heights = {}
    for T in T_list:
        h = discrete_heights(seed, f"conv-T{T}", T, p, dist, reps)
        norm = h / a_scale(p * T * T, dist)
        heights[T] = norm
        ks.append(ks_distance(Ecdf.from_sample(norm), ref_ecdf))
    rng = np.random.default_rng(derive_seed(seed, "conv-rem", 0))
    rem = np.median([remainder_estimate(alpha, k + 1, 2 * k, rng) for _ in range(32)])
    return ConvergenceReport(
        alpha=alpha, p=p, k=k, reps=reps, T_list=list(T_list), ks=ks,
        remainder_diagnostic=float(rem), heights=heights, reference=ref,
    )


@dataclass
class SweepReport:
    alpha: float
    zeta_list: list
    T_list: list
    reps: int
    medians: dict
    iqr: dict
    slopes: dict
    slope_ci: dict
    samples: dict = dc_field(default_factory=dict)


def phase_sweep(alpha, zeta_list, T_list, reps, seed, n_boot=1000):
    """Vanishing-sticking sweep p = T^(-zeta) around the critical exponent.

    Each cell normalizes h(0, T) by the scale of T^(2-zeta) draws; per zeta
    the log-log slope of the medians over T is fitted with a bootstrap CI.
    """
    dist = Pareto(alpha)
    medians, iqr, slopes, slope_ci, samples = {}, {}, {}, {}, {}
    for zeta in zeta_list:
        per_T = []
        for T in T_list:
            p = float(T) ** (-zeta)
            h = discrete_heights(seed, f"sweep-z{zeta}-T{T}", T, p, dist, reps)
            norm = h / a_scale(float(T) ** (2.0 - zeta), dist)
            per_T.append(norm)
            medians[(zeta, T)] = float(np.median(norm))
            q1, q3 = np.quantile(norm, [0.25, 0.75])
            iqr[(zeta, T)] = (float(q1), float(q3))
            samples[(zeta, T)] = norm
        med = [medians[(zeta, T)] for T in T_list]
        slopes[zeta] = loglog_slope(T_list, med)
        rng = np.random.default_rng(derive_seed(seed, f"sweep-boot-z{zeta}", 0))
        slope_ci[zeta] = bootstrap_median_slope_ci(T_list, per_T, rng, n_boot=n_boot)
    return SweepReport(
        alpha=alpha, zeta_list=list(zeta_list), T_list=list(T_list), reps=reps,
        medians=medians, iqr=iqr, slopes=slopes, slope_ci=slope_ci, samples=samples,
    )


def rd_heights(master, label, alpha, T, reps, max_block=20_000_000):
    """Fast zero-sticking path: column heights are random sums, no cone needed.

    Draw volume is reps * T in expectation, so replicates are processed in
    blocks that cap peak memory.
    """
    dist = Pareto(alpha)
    rng = np.random.default_rng(derive_seed(master, label, 0))
    block = max(1, int(max_block / max(T, 1.0)))
    out = []
    done = 0
    while done < reps:
        n = min(block, reps - done)
        counts = rng.poisson(T, size=n)
        u = rng.random(int(counts.sum()))
        u = np.clip(u, np.finfo(float).tiny, None)
        draws = sample_height(dist, 1.0 - u)  # 1-u keeps u=0 harmless, law unchanged
        bounds = np.concatenate([[0], np.cumsum(counts)])
        sums = np.add.reduceat(np.concatenate([draws, [0.0]]), bounds[:-1])
        sums[counts == 0] = 0.0
        out.append(sums)
        done += n
    return np.concatenate(out)


def rd_limit_check(alpha, T_list, reps, seed):
    """Self-consistency of the centered, scaled zero-sticking heights across T."""
    dist = Pareto(alpha)
    ecdfs = []
    for T in T_list:
        h = rd_heights(seed, f"rd-T{T}", alpha, T, reps)
        norm = (h - c_centering(T, dist)) / a_scale(T, dist)
        ecdfs.append(Ecdf.from_sample(norm))
    out = []
    for (T1, e1), (T2, e2) in zip(zip(T_list, ecdfs), list(zip(T_list, ecdfs))[1:]):
        out.append(((T1, T2), ks_distance(e1, e2)))
    return out


def moment_check(p_list, T_list, reps, seed):
    """Empirical cone moments against their closed forms.

    Rows: p, T, reps, then (mean, SE, target) for the interior count, the
    boundary count, and the backward split time.
    """
    rows = []
    for p in p_list:
        for T in T_list:
            n_int = np.empty(reps)
            n_bnd = np.empty(reps)
            split = np.empty(reps)
            for r in range(reps):
                fld = as_field(FieldSeed(derive_seed(seed, f"mom-p{p}-T{T}", r)), T)
                cone = build_cone(fld, T, p)
                att = attainable(cone, fld, p, Pareto(1.5))
                n_int[r] = att.n_interior
                n_bnd[r] = att.n_boundary
                split[r] = cone.split_time
            decay = (1.0 - np.exp(-p * T)) / p
            rows.append({
                "p": p, "T": T, "reps": reps,
                "interior_mean": float(n_int.mean()), "interior_se": standard_error(n_int),
                "interior_target": p * T * T - T + decay,
                "boundary_mean": float(n_bnd.mean()), "boundary_se": standard_error(n_bnd),
                "boundary_target": 2.0 * T - decay,
                "split_mean": float(split.mean()), "split_se": standard_error(split),
                "split_target": decay,
            })
    return rows
