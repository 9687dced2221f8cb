"""Auxiliary deposition model with unit Bernoulli block heights.

Reuses the backward evaluation verbatim with 0/1 marks: the height of the
origin column is then the largest number of mark-1 attainable points a single
compatible path can collect, and its mean obeys a (sigma p T^2)^(1/(2-zeta))
upper bound whose exponent the harness fits empirically.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cone import attainable, build_cone, lpp_height
from .dists import Bernoulli
from .field import as_field

__all__ = ["BbdConfig", "bbd_height", "scaling_exponent"]


@dataclass(frozen=True)
class BbdConfig:
    sigma: float
    p: float
    T: float
    zeta: float | None = None
    reps: int = 1

    def __post_init__(self):
        if not 0.0 < self.sigma <= 1.0:
            raise ValueError(f"sigma must lie in (0, 1], got {self.sigma}")
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"p must lie in (0, 1], got {self.p}")
        if not self.T > 0.0:
            raise ValueError(f"T must be > 0, got {self.T}")

    @classmethod
    def from_zeta(cls, sigma, zeta, T, reps=1):
        """p implied by the vanishing-sticking schedule p = T^(-zeta)."""
        if not 0.0 <= zeta <= 1.0:
            raise ValueError(f"zeta must lie in [0, 1], got {zeta}")
        return cls(sigma=sigma, p=float(T) ** (-zeta), T=T, zeta=zeta, reps=reps)


def bbd_height(seed, cfg):
    """Origin height at time T under Bernoulli(sigma) marks; integer-valued."""
    fld = as_field(seed, cfg.T)
    cone = build_cone(fld, cfg.T, cfg.p)
    att = attainable(cone, fld, cfg.p, Bernoulli(cfg.sigma))
    return lpp_height(att)


def scaling_exponent(results):
    """Least-squares growth exponent of mean height against sigma * p * T^2.

    `results` rows are (sigma, p, T, mean_height).  Requires at least four
    distinct abscissas spanning two decades and a single zeta (p * T^zeta
    constant is not checked; the caller fixes the schedule).
    """
    rows = [(s * p * T * T, h) for s, p, T, h in results]
    xs = np.array([r[0] for r in rows], dtype=float)
    ys = np.array([r[1] for r in rows], dtype=float)
    distinct = np.unique(xs)
    if len(distinct) < 4:
        raise ValueError(f"need >= 4 distinct sigma*p*T^2 values, got {len(distinct)}")
    if distinct.max() / distinct.min() < 100.0:
        raise ValueError("sigma*p*T^2 values must span at least two decades")
    if np.any(ys <= 0.0):
        raise ValueError("mean heights must be positive for a log-log fit")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])
