"""Unit tests for KL divergence between slot populations."""

import math

import numpy as np
import pytest

from src.exceptions import DegeneracyError, ValidationError
from src.sanitizers.grr import GrrConfig, grr_sanitize
from src.traces.grid import GridSpec
from src.traces.store import TraceSet
from src.utility.divergence import kl_divergence, population_kl_over_time, slot_counts

GRID = GridSpec(width=4, height=4)


@pytest.fixture
def crowd():
    """Two hundred users in cell (0, 0) at bins 0-19 of day 0."""
    records = [(uid, 0, b, 0, 0) for uid in range(200) for b in range(20)]
    return TraceSet.from_records(GRID, records, day_count=1)


class TestKlDivergence:
    """Test suite for kl_divergence."""

    def test_identical(self):
        """Test KL(p || p) = 0."""
        p = np.array([0.2, 0.3, 0.5])
        assert kl_divergence(p, p) == pytest.approx(0.0, abs=1e-12)

    def test_point_mass_against_uniform(self):
        """Test the smoothed value stays close to ln 2."""
        assert kl_divergence(np.array([1.0, 0.0]), np.array([0.5, 0.5])) == pytest.approx(
            math.log(2), rel=1e-6
        )

    def test_zero_support_stays_finite(self):
        """Test smoothing keeps disjoint supports finite."""
        value = kl_divergence(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        assert math.isfinite(value)
        assert value > 10

    def test_unnormalized_inputs(self):
        """Test counts are normalized before comparison."""
        assert kl_divergence(np.array([2.0, 2.0]), np.array([1.0, 1.0])) == pytest.approx(0.0)

    @pytest.mark.parametrize(
        "p,q", [([1.0], [0.5, 0.5]), ([], []), ([-0.1, 1.1], [0.5, 0.5])]
    )
    def test_invalid(self, p, q):
        """Test shape, emptiness and sign checks."""
        with pytest.raises(ValidationError):
            kl_divergence(np.array(p), np.array(q))


class TestPopulationKl:
    """Test suite for slot_counts and population_kl_over_time."""

    def test_slot_counts(self, crowd):
        """Test one row per slot and one column per cell."""
        counts = slot_counts(crowd)

        assert counts.shape == (48, 16)
        assert counts[5, 0] == 200
        assert counts.sum() == crowd.n_samples

    def test_identical_sets(self, crowd):
        """Test a release compared with itself has zero divergence."""
        result = population_kl_over_time(crowd, crowd)

        assert result.mean == pytest.approx(0.0, abs=1e-9)
        assert result.slots.tolist() == list(range(20))

    def test_debiasing_reduces_divergence(self, crowd):
        """Test inverting the randomized response channel helps."""
        cfg = GrrConfig.for_grid(GRID, 3.0, seed=0)
        noisy = grr_sanitize(crowd, cfg).traces

        raw = population_kl_over_time(crowd, noisy)
        debiased = population_kl_over_time(crowd, noisy, debias=cfg)

        assert debiased.mean < raw.mean

    def test_grid_mismatch(self, crowd):
        """Test sets on different grids cannot be compared."""
        other = TraceSet.from_records(GridSpec(width=5, height=4), [(1, 0, 0, 0, 0)], day_count=1)
        with pytest.raises(ValidationError):
            population_kl_over_time(crowd, other)

    def test_no_common_slot(self, crowd):
        """Test disjoint time support is degenerate."""
        other = TraceSet.from_records(GRID, [(1, 0, 40, 0, 0)], day_count=1)
        with pytest.raises(DegeneracyError):
            population_kl_over_time(crowd, other)
