import numpy as np
import pytest

from heavybd import (
    BbdConfig,
    Bernoulli,
    EventField,
    FieldSeed,
    attainable,
    bbd_height,
    build_cone,
    derive_seed,
    max_collect_count,
    scaling_exponent,
)


def test_config_validation_and_zeta_schedule():
    with pytest.raises(ValueError):
        BbdConfig(sigma=0.0, p=1.0, T=10.0)
    with pytest.raises(ValueError):
        BbdConfig(sigma=0.5, p=1.5, T=10.0)
    cfg = BbdConfig.from_zeta(0.5, 0.5, 100.0)
    assert cfg.p == pytest.approx(0.1)


def test_height_is_integer_and_bounded_by_marked_points():
    for r in range(40):
        seed = derive_seed(10, "bbd-int", r)
        cfg = BbdConfig(sigma=0.4, p=0.8, T=6.0)
        h = bbd_height(seed, cfg)
        assert h == int(h) >= 0
        fld = EventField(FieldSeed(seed), cfg.T)
        cone = build_cone(fld, cfg.T, cfg.p)
        att = attainable(cone, fld, cfg.p, Bernoulli(cfg.sigma))
        assert h <= att.eta.sum() + 1e-12


def test_sigma_one_equals_max_collect_over_all_points():
    for r in range(25):
        seed = derive_seed(11, "bbd-all", r)
        cfg = BbdConfig(sigma=1.0, p=1.0, T=5.0)
        h = bbd_height(seed, cfg)
        fld = EventField(FieldSeed(seed), cfg.T)
        cone = build_cone(fld, cfg.T, cfg.p)
        att = attainable(cone, fld, cfg.p, Bernoulli(1.0))
        assert int(h) == max_collect_count(att, np.arange(len(att)))


def test_vanishing_sigma_gives_zero_heights():
    zeros = sum(
        bbd_height(derive_seed(12, "bbd-zero", r), BbdConfig(sigma=1e-4, p=1.0, T=5.0)) == 0.0
        for r in range(200)
    )
    assert zeros >= 190


def test_mean_envelope_in_the_sparse_regime():
    # E h <= sigma * E N_T <= 2 sigma p T^2 whenever sigma p T^2 <= 1
    sigma, p, T, reps = 0.02, 1.0, 5.0, 3000
    hs = np.array([
        bbd_height(derive_seed(13, "bbd-env", r), BbdConfig(sigma=sigma, p=p, T=T))
        for r in range(reps)
    ])
    se = hs.std(ddof=1) / np.sqrt(reps)
    assert hs.mean() - 3.0 * se <= 2.0 * sigma * p * T * T


def test_scaling_exponent_recovers_synthetic_slope():
    cells = [(1.0, 1.0, T, (T * T) ** 0.4) for T in (4.0, 10.0, 40.0, 100.0)]
    assert scaling_exponent(cells) == pytest.approx(0.4, abs=1e-12)


def test_scaling_exponent_diagnostics():
    with pytest.raises(ValueError):
        scaling_exponent([(1.0, 1.0, 10.0, 5.0)] * 4)  # one distinct abscissa
    with pytest.raises(ValueError):
        scaling_exponent([(1.0, 1.0, T, T) for T in (10.0, 11.0, 12.0, 13.0)])  # narrow span


def test_binomial_mixture_decomposition():
    # Bernoulli-marked height should match the binomial mixture of
    # max-collect values over uniformly selected subsets (two code paths).
    sigma, p, T, reps = 0.4, 1.0, 5.0, 10_000
    rng = np.random.default_rng(314)
    a = np.empty(reps)
    b = np.empty(reps)
    for r in range(reps):
        seed = derive_seed(14, "bbd-mix", r)
        fld = EventField(FieldSeed(seed), T)
        cone = build_cone(fld, T, p)
        att = attainable(cone, fld, p, Bernoulli(sigma))
        a[r] = bbd_height(seed, BbdConfig(sigma=sigma, p=p, T=T))
        n = len(att)
        k = rng.binomial(n, sigma) if n else 0
        sel = rng.choice(n, size=k, replace=False) if k else []
        b[r] = max_collect_count(att, sel)
    se = np.sqrt(a.var(ddof=1) / reps + b.var(ddof=1) / reps)
    assert abs(a.mean() - b.mean()) < 3.0 * se
