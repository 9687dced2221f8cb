"""Small statistics toolkit: ECDFs, KS distances, slope fits, bootstrap CIs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Ecdf",
    "ks_distance",
    "ks_distance_to_cdf",
    "standard_error",
    "loglog_slope",
    "bootstrap_median_slope_ci",
]


@dataclass(frozen=True)
class Ecdf:
    """Right-continuous empirical distribution function of a sample."""

    values: np.ndarray

    @classmethod
    def from_sample(cls, sample):
        arr = np.sort(np.asarray(sample, dtype=float))
        if arr.size == 0:
            raise ValueError("empty sample")
        return cls(values=arr)

    @property
    def n(self):
        return len(self.values)

    def __call__(self, x):
        r = np.searchsorted(self.values, np.asarray(x, dtype=float), side="right") / self.n
        return float(r) if np.ndim(x) == 0 else r


def ks_distance(a, b):
    """Sup-norm distance between two ECDF step functions."""
    grid = np.concatenate([a.values, b.values])
    return float(np.max(np.abs(a(grid) - b(grid))))


def ks_distance_to_cdf(sample, cdf):
    """One-sample KS statistic against an analytic CDF callable."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = len(x)
    if n == 0:
        raise ValueError("empty sample")
    f = np.asarray(cdf(x), dtype=float)
    hi = np.max(np.arange(1, n + 1) / n - f)
    lo = np.max(f - np.arange(0, n) / n)
    return float(max(hi, lo))


def standard_error(sample):
    arr = np.asarray(sample, dtype=float)
    return float(arr.std(ddof=1) / np.sqrt(len(arr)))


def loglog_slope(x, y):
    """Least-squares slope of log y against log x."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


def bootstrap_median_slope_ci(x, samples, rng, n_boot=1000, level=0.95):
    """Percentile CI for the log-log slope of per-cell medians.

    `samples[i]` holds the replicate values of cell x[i]; each bootstrap
    round resamples every cell with replacement, takes medians, and refits.
    """
    lx = np.log(np.asarray(x, dtype=float))
    cols = [np.asarray(s, dtype=float) for s in samples]
    med_boot = np.empty((n_boot, len(cols)))
    for j, col in enumerate(cols):
        idx = rng.integers(0, len(col), size=(n_boot, len(col)))
        med_boot[:, j] = np.median(col[idx], axis=1)
    ly = np.log(med_boot)
    lx_c = lx - lx.mean()
    slopes = (ly @ lx_c) / np.dot(lx_c, lx_c)
    a = (1.0 - level) / 2.0
    lo, hi = np.quantile(slopes, [a, 1.0 - a])
    return float(lo), float(hi)
