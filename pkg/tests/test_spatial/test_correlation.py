"""Unit tests for Spearman and clustered correlation."""

import numpy as np
import pytest
from scipy import stats

from src.exceptions import CorrelationUndefinedError, ValidationError
from src.spatial.correlation import block_sums, cell_correlation, clustered_correlation, spearman


class TestSpearman:
    """Test suite for spearman."""

    def test_perfect_orderings(self):
        """Test monotone and reversed vectors."""
        assert spearman(np.array([1, 2, 3]), np.array([10, 20, 300])) == 1.0
        assert spearman(np.array([1, 2, 3]), np.array([3, 2, 1])) == -1.0

    def test_matches_scipy_with_ties(self):
        """Test average ranks agree with scipy on tied data."""
        rng = np.random.default_rng(0)
        a = rng.integers(0, 5, size=50)
        b = a + rng.integers(0, 3, size=50)

        assert spearman(a, b) == pytest.approx(stats.spearmanr(a, b).statistic)

    def test_invariant_under_increasing_maps(self):
        """Test strictly increasing maps of either input leave the value unchanged."""
        rng = np.random.default_rng(4)
        a = rng.gamma(1.5, 10.0, size=200)
        b = a + rng.normal(0, 8.0, size=200)
        base = spearman(a, b)

        assert spearman(np.log1p(a), b) == pytest.approx(base, abs=1e-12)
        assert spearman(a, np.cbrt(b) * 3.0 + 1.0) == pytest.approx(base, abs=1e-12)
        assert spearman(np.log1p(a), np.exp(b / 50.0)) == pytest.approx(base, abs=1e-12)

    def test_constant_vector(self):
        """Test a constant input raises CorrelationUndefinedError."""
        with pytest.raises(CorrelationUndefinedError):
            spearman(np.ones(5), np.arange(5))

    def test_too_short(self):
        """Test fewer than two points is undefined."""
        with pytest.raises(CorrelationUndefinedError):
            spearman(np.array([1.0]), np.array([2.0]))

    def test_length_mismatch(self):
        """Test mismatched lengths raise ValidationError."""
        with pytest.raises(ValidationError):
            spearman(np.arange(3), np.arange(4))

    def test_non_finite(self):
        """Test NaN inputs raise ValidationError."""
        with pytest.raises(ValidationError):
            spearman(np.array([1.0, np.nan]), np.array([1.0, 2.0]))


class TestClusteredCorrelation:
    """Test suite for block sums and clustered correlation."""

    def test_block_sums(self):
        """Test non-overlapping block sums of a [x, y] array."""
        values = np.arange(16, dtype=np.float64).reshape(4, 4)
        sums = block_sums(values, (2, 2))

        assert sums.shape == (2, 2)
        assert sums[0, 0] == values[:2, :2].sum()
        assert sums[1, 1] == values[2:, 2:].sum()

    def test_block_size_must_divide(self):
        """Test a cluster that does not divide the field is rejected."""
        with pytest.raises(ValidationError):
            block_sums(np.zeros((4, 4)), (3, 2))

    def test_identical_fields(self):
        """Test a field correlates perfectly with a scaled copy."""
        rng = np.random.default_rng(1)
        field = rng.gamma(2.0, size=(20, 20))

        assert clustered_correlation(field, 3 * field, (5, 5)) == pytest.approx(1.0)
        assert cell_correlation(field, 3 * field) == pytest.approx(1.0)

    def test_shape_mismatch(self):
        """Test fields and rasters must share a shape."""
        with pytest.raises(ValidationError):
            clustered_correlation(np.ones((4, 4)), np.ones((4, 2)), (2, 2))

    def test_uniform_blocks_undefined(self):
        """Test equal block sums make the score undefined."""
        field = np.ones((4, 4))
        raster = np.arange(16, dtype=np.float64).reshape(4, 4)

        with pytest.raises(CorrelationUndefinedError):
            clustered_correlation(field, raster, (2, 2))
