"""Block-height distributions, their normalizing sequences, and the limit weights.

The admissible height laws are an exact Pareto family (continuous, regularly
varying with index ``alpha`` in (0, 2)) and a Bernoulli law used only by the
auxiliary integer-height model.  For Pareto the slowly varying factor is the
constant ``x_min``, so every normalizing quantity below is closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Pareto",
    "Bernoulli",
    "HeightDistribution",
    "WeightSequence",
    "sample_height",
    "a_scale",
    "c_centering",
    "weight_sequence",
]


@dataclass(frozen=True)
class Pareto:
    """Pareto law with survival (x/x_min)^(-alpha) for x >= x_min."""

    alpha: float
    x_min: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must lie in the open interval (0, 2), got {self.alpha}")
        if not self.x_min > 0.0:
            raise ValueError(f"x_min must be > 0, got {self.x_min}")


@dataclass(frozen=True)
class Bernoulli:
    """Height 1 with probability sigma, else 0.  Integer-height model only."""

    sigma: float

    def __post_init__(self):
        if not 0.0 < self.sigma <= 1.0:
            raise ValueError(f"sigma must lie in (0, 1], got {self.sigma}")


HeightDistribution = Pareto | Bernoulli


def _require_pareto(dist, op):
    if not isinstance(dist, Pareto):
        raise TypeError(f"{op} requires a Pareto height distribution, got {type(dist).__name__}")


def sample_height(dist, u):
    """Inverse-CDF height for a uniform u in (0, 1).  Accepts scalars or arrays."""
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr <= 0.0) | (u_arr >= 1.0)):
        raise ValueError("u must lie in the open interval (0, 1)")
    if isinstance(dist, Pareto):
        with np.errstate(over="ignore"):
            out = dist.x_min * (1.0 - u_arr) ** (-1.0 / dist.alpha)
        if np.any(np.isinf(out)):
            raise OverflowError("Pareto height overflowed to +inf")
    elif isinstance(dist, Bernoulli):
        out = np.where(u_arr > 1.0 - dist.sigma, 1.0, 0.0)
    else:
        raise TypeError(f"unsupported distribution {type(dist).__name__}")
    if np.ndim(u) == 0:
        return float(out)
    return out


def a_scale(t, dist):
    """Normalizing scale a_t = F^{-1}(1 - 1/t), the size of the largest of t draws."""
    _require_pareto(dist, "a_scale")
    if not t > 1.0:
        raise ValueError(f"t must be > 1, got {t}")
    return dist.x_min * t ** (1.0 / dist.alpha)


def c_centering(T, dist):
    """Centering constant for the independent-columns limit at time T.

    Zero for alpha < 1, the truncated mean T * integral_0^{a_T} x dF for
    alpha == 1 (closed form T * x_min * log T for Pareto), and T times the
    mean for alpha in (1, 2).
    """
    _require_pareto(dist, "c_centering")
    if not T > 0.0:
        raise ValueError(f"T must be > 0, got {T}")
    alpha, x_min = dist.alpha, dist.x_min
    if alpha < 1.0:
        return 0.0
    if alpha == 1.0:
        if T <= 1.0:
            return 0.0
        return T * x_min * math.log(T)
    return T * alpha * x_min / (alpha - 1.0)


@dataclass(frozen=True)
class WeightSequence:
    """Strictly decreasing weights M_i = X_i^(-1/alpha), X the arrivals of a unit-rate Poisson process."""

    m: np.ndarray
    alpha: float

    def __post_init__(self):
        if np.any(np.diff(self.m) >= 0.0) or np.any(self.m <= 0.0):
            raise ValueError("weights must be strictly decreasing and positive")

    def __len__(self):
        return len(self.m)


def weight_sequence(k, alpha, rng):
    """Draw the k largest limit weights from their joint law."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in the open interval (0, 2), got {alpha}")
    x = np.cumsum(rng.standard_exponential(k))
    if np.any(np.diff(x) <= 0.0):
        # float-resolution tie between consecutive arrivals; a null event
        raise ValueError("tied Poisson arrivals at float resolution; redraw with a fresh rng")
    return WeightSequence(m=x ** (-1.0 / alpha), alpha=alpha)
