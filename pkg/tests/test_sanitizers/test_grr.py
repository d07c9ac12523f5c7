"""Unit tests for generalized randomized response."""

import math

import numpy as np
import pytest

from src.exceptions import ValidationError
from src.sanitizers.grr import (
    GrrConfig,
    grr_channel_matrix,
    grr_debias,
    grr_estimator_variance,
    grr_perturb,
    grr_sanitize,
)
from src.traces.grid import GridSpec
from src.traces.store import TraceSet


@pytest.fixture
def traces():
    """Users all sitting in cell (0, 0) of a 4x4 grid."""
    records = [(uid, 0, b, 0, 0) for uid in range(50) for b in range(20)]
    return TraceSet.from_records(GridSpec(width=4, height=4), records, day_count=1)


class TestGrrConfig:
    """Test suite for GrrConfig probabilities."""

    def test_known_values(self):
        """Test p and q for eps = ln 2 over three cells."""
        cfg = GrrConfig(epsilon=math.log(2), k=3, seed=0)
        assert (cfg.p, cfg.q) == (pytest.approx(0.5), pytest.approx(0.25))

    @pytest.mark.parametrize("epsilon,k", [(0.1, 2), (1.0, 100), (5.0, 40000)])
    def test_channel_is_stochastic(self, epsilon, k):
        """Test p + (k - 1) q = 1 and p / q = e^eps."""
        cfg = GrrConfig(epsilon=epsilon, k=k, seed=0)

        assert cfg.p + (k - 1) * cfg.q == pytest.approx(1.0)
        assert cfg.p / cfg.q == pytest.approx(math.exp(epsilon))

    def test_large_epsilon_does_not_overflow(self):
        """Test eps = 1000 gives p = 1 and q = 0."""
        cfg = GrrConfig(epsilon=1000.0, k=10, seed=0)
        assert cfg.p == 1.0
        assert cfg.q == pytest.approx(0.0, abs=1e-300)

    def test_for_grid(self):
        """Test the domain size comes from the grid."""
        assert GrrConfig.for_grid(GridSpec(width=3, height=5), 1.0, seed=0).k == 15


class TestGrrPerturb:
    """Test suite for grr_perturb."""

    def test_keep_rate(self):
        """Test a sample keeps its cell with probability p."""
        cfg = GrrConfig(epsilon=1.0, k=10, seed=0)
        indices = np.full(50000, 4)
        out = grr_perturb(indices, cfg, np.random.default_rng(0))

        assert np.mean(out == 4) == pytest.approx(cfg.p, abs=0.01)

    def test_replacement_uniform_over_others(self):
        """Test replaced samples spread evenly over the other cells."""
        cfg = GrrConfig(epsilon=1.0, k=5, seed=0)
        out = grr_perturb(np.full(50000, 2), cfg, np.random.default_rng(1))
        others = np.bincount(out[out != 2], minlength=5)[[0, 1, 3, 4]]

        np.testing.assert_allclose(others / others.sum(), 0.25, atol=0.01)
        assert out.min() >= 0 and out.max() < 5

    @pytest.mark.parametrize("k,epsilon", [(16, 1.0), (400, 2.0), (40000, 4.0)])
    def test_keep_rate_over_grid_domains(self, k, epsilon):
        """Test the keep rate over a million samples is p within sampling error."""
        cfg = GrrConfig(epsilon=epsilon, k=k, seed=0)
        rng = np.random.default_rng(k)
        indices = rng.integers(0, k, size=1_000_000)

        out = grr_perturb(indices, cfg, rng)
        rate = np.mean(out == indices)

        assert abs(rate - cfg.p) <= 4.5 * math.sqrt(cfg.p * (1 - cfg.p) / indices.size)
        assert out.min() >= 0 and out.max() < k


class TestGrrSanitize:
    """Test suite for grr_sanitize."""

    def test_counters(self, traces):
        """Test kept and replaced add up to the sample count."""
        result = grr_sanitize(traces, GrrConfig.for_grid(traces.grid, 1.0, seed=2))
        counters = result.provenance.counters

        assert counters["kept"] + counters["replaced"] == traces.n_samples
        assert result.provenance.parameters["p"] == pytest.approx(
            GrrConfig(epsilon=1.0, k=16, seed=2).p
        )

    def test_domain_mismatch(self, traces):
        """Test k must equal the grid's cell count."""
        with pytest.raises(ValidationError):
            grr_sanitize(traces, GrrConfig(epsilon=1.0, k=15, seed=0))

    def test_deterministic_across_workers(self, traces):
        """Test output does not depend on the worker count."""
        cfg = GrrConfig.for_grid(traces.grid, 0.5, seed=4)
        assert (
            grr_sanitize(traces, cfg, workers=1).traces.digest()
            == grr_sanitize(traces, cfg, workers=3).traces.digest()
        )


class TestGrrDebias:
    """Test suite for debiasing and the channel helpers."""

    def test_exact_inversion(self):
        """Test debiasing the expected observation recovers f."""
        cfg = GrrConfig(epsilon=1.5, k=4, seed=0)
        f = np.array([0.5, 0.3, 0.2, 0.0])
        observed = grr_channel_matrix(cfg) @ f

        result = grr_debias(observed, cfg)

        np.testing.assert_allclose(result.raw, f, atol=1e-12)
        np.testing.assert_allclose(result.clipped, f, atol=1e-12)

    def test_negative_estimates_clipped(self):
        """Test negative raw estimates are clipped and renormalized."""
        cfg = GrrConfig(epsilon=1.0, k=3, seed=0)
        result = grr_debias(np.array([0.6, 0.4, 0.0]), cfg)

        assert result.raw[2] < 0
        assert result.clipped[2] == 0.0
        assert result.clipped.sum() == pytest.approx(1.0)

    @pytest.mark.parametrize("observed", [[0.5, 0.5], [0.5, 0.6, -0.1], [0.2, 0.2, 0.2]])
    def test_invalid_observed(self, observed):
        """Test shape and probability-vector checks."""
        with pytest.raises(ValidationError):
            grr_debias(np.array(observed), GrrConfig(epsilon=1.0, k=3, seed=0))

    def test_channel_columns_sum_to_one(self):
        """Test each input's output distribution sums to 1."""
        matrix = grr_channel_matrix(GrrConfig(epsilon=0.7, k=6, seed=0))
        np.testing.assert_allclose(matrix.sum(axis=0), 1.0)

    def test_channel_domain_cap(self):
        """Test the dense matrix is refused beyond 4096 cells."""
        with pytest.raises(ValidationError):
            grr_channel_matrix(GrrConfig(epsilon=1.0, k=4097, seed=0))

    def test_variance(self):
        """Test Var = f~(1 - f~) / (n (p - q)^2)."""
        cfg = GrrConfig(epsilon=math.log(2), k=3, seed=0)
        variance = grr_estimator_variance(np.array([1.0, 0.0, 0.0]), n=10, cfg=cfg)

        np.testing.assert_allclose(variance, [0.25 / 0.625, 0.1875 / 0.625, 0.1875 / 0.625])

    @pytest.mark.parametrize("k,epsilon", [(16, 1.0), (400, 2.0), (40000, 4.0)])
    def test_debiased_error_within_variance_bound(self, k, epsilon):
        """Test the L1 error of debiased frequencies stays within three deviations."""
        cfg = GrrConfig(epsilon=epsilon, k=k, seed=0)
        rng = np.random.default_rng(k + 1)
        n = 1_000_000
        weights = 1.0 / np.arange(1, k + 1)
        counts = rng.multinomial(n, weights / weights.sum())
        f = counts / n

        out = grr_perturb(np.repeat(np.arange(k), counts), cfg, rng)
        result = grr_debias(np.bincount(out, minlength=k) / n, cfg)
        sigma = np.sqrt(grr_estimator_variance(f, n, cfg))

        assert np.abs(result.raw - f).sum() <= 3 * sigma.sum()
        assert result.clipped.sum() == pytest.approx(1.0)

    def test_variance_needs_samples(self):
        """Test n < 1 is rejected."""
        with pytest.raises(ValidationError):
            grr_estimator_variance(np.zeros(3), n=0, cfg=GrrConfig(epsilon=1.0, k=3, seed=0))
