import numpy as np
import pytest

from ineqnet import bootstrap_mean_ci, bootstrap_mean_diff_ci
from ineqnet.errors import ConfigError


class TestMeanCI:
    def test_constant_data_degenerate(self):
        ci = bootstrap_mean_ci([5, 5, 5, 5], iters=200, seed=1)
        assert ci.lower == 5.0 and ci.upper == 5.0

    def test_deterministic_for_seed(self):
        sample = list(np.random.default_rng(0).normal(100, 10, size=50))
        a = bootstrap_mean_ci(sample, iters=500, seed=42)
        b = bootstrap_mean_ci(sample, iters=500, seed=42)
        assert (a.lower, a.upper) == (b.lower, b.upper)

    def test_seed_changes_interval(self):
        sample = list(np.random.default_rng(0).normal(100, 10, size=50))
        a = bootstrap_mean_ci(sample, iters=500, seed=1)
        b = bootstrap_mean_ci(sample, iters=500, seed=2)
        assert (a.lower, a.upper) != (b.lower, b.upper)

    def test_iters_floor(self):
        with pytest.raises(ConfigError):
            bootstrap_mean_ci([1, 2, 3], iters=99)

    def test_empty_sample(self):
        with pytest.raises(ValueError):
            bootstrap_mean_ci([], iters=100)

    def test_level_bounds(self):
        with pytest.raises(ConfigError):
            bootstrap_mean_ci([1, 2, 3], iters=100, level=1.5)

    def test_interval_brackets_mean_roughly(self):
        rng = np.random.default_rng(5)
        sample = rng.normal(100, 10, size=200)
        ci = bootstrap_mean_ci(sample, iters=1000, level=0.95, seed=0)
        assert ci.lower < sample.mean() < ci.upper
        assert ci.upper - ci.lower < 5.0  # ~4 * sigma/sqrt(n)


class TestMeanDiffCI:
    def test_constants(self):
        ci = bootstrap_mean_diff_ci([10, 10], [4, 4], iters=200, seed=0)
        assert (ci.lower, ci.upper) == (6.0, 6.0)

    def test_equal_constants_zero(self):
        ci = bootstrap_mean_diff_ci([7, 7, 7], [7, 7, 7], iters=200, seed=0)
        assert (ci.lower, ci.upper) == (0.0, 0.0)

    def test_deterministic(self):
        rng = np.random.default_rng(1)
        a = list(rng.normal(10, 2, 40))
        b = list(rng.normal(5, 2, 40))
        c1 = bootstrap_mean_diff_ci(a, b, iters=300, seed=9)
        c2 = bootstrap_mean_diff_ci(a, b, iters=300, seed=9)
        assert (c1.lower, c1.upper) == (c2.lower, c2.upper)

    def test_sides_use_independent_streams(self):
        # a == b but the two sides must not resample identically
        sample = list(np.random.default_rng(2).normal(0, 1, 30))
        ci = bootstrap_mean_diff_ci(sample, sample, iters=300, seed=0)
        assert ci.lower < 0.0 < ci.upper
        assert ci.upper > ci.lower


def test_coverage_smoke():
    # small-scale version of the acceptance coverage check
    rng = np.random.default_rng(11)
    mu, trials, hits = 100.0, 120, 0
    for t in range(trials):
        sample = rng.normal(mu, 10, size=200)
        ci = bootstrap_mean_ci(sample, iters=200, level=0.95, seed=0, stream_key=(t,))
        if ci.lower <= mu <= ci.upper:
            hits += 1
    assert 0.88 <= hits / trials <= 1.0
