"""Unit tests for m-point unicity."""

import numpy as np
import pytest

from src.exceptions import ValidationError
from src.metrics.unicity import unicity, unicity_curve
from src.traces.grid import GridSpec
from src.traces.store import TraceSet

GRID = GridSpec(width=5, height=5)


@pytest.fixture
def random_traces():
    """Thirty users with twenty samples each over three days."""
    rng = np.random.default_rng(11)
    records = []
    for uid in range(30):
        for slot in rng.choice(3 * 48, size=20, replace=False):
            records.append((uid, slot // 48, slot % 48, *rng.integers(0, 5, size=2)))
    return TraceSet.from_records(GRID, records, day_count=3)


class TestUnicity:
    """Test suite for unicity and unicity_curve."""

    def test_disjoint_users_are_unique(self):
        """Test users alone in their cells are always singled out."""
        records = [(uid, 0, b, uid, 0) for uid in range(5) for b in range(3)]
        ts = TraceSet.from_records(GRID, records, day_count=1)

        assert unicity(ts, m=1, trials=20, seed=0) == 1.0

    def test_identical_users_never_unique(self):
        """Test users with identical traces form one anonymity set."""
        records = [(uid, 0, b, 2, 2) for uid in range(4) for b in range(5)]
        ts = TraceSet.from_records(GRID, records, day_count=1)

        curve = unicity_curve(ts, [1, 3, 5], trials=20, seed=0)
        assert curve.values == [0.0, 0.0, 0.0]

    def test_curve_monotone(self, random_traces):
        """Test nested draws make U(m) non-decreasing in m."""
        curve = unicity_curve(random_traces, [1, 2, 3, 4], trials=200, seed=5)

        assert curve.values == sorted(curve.values)
        assert all(0.0 <= v <= 1.0 for v in curve.values)

    def test_ms_sorted_and_deduplicated(self, random_traces):
        """Test ms are normalized."""
        curve = unicity_curve(random_traces, [3, 1, 3], trials=10, seed=0)
        assert curve.ms == [1, 3]

    def test_deterministic_across_workers(self, random_traces):
        """Test the estimate depends on the seed only."""
        a = unicity_curve(random_traces, [2], trials=50, seed=8, workers=1)
        b = unicity_curve(random_traces, [2], trials=50, seed=8, workers=4)
        assert a.unique_counts == b.unique_counts

    def test_excluded_users(self):
        """Test users shorter than max(ms) are excluded."""
        records = [(1, 0, b, 0, 0) for b in range(4)] + [(2, 0, 0, 1, 1)]
        ts = TraceSet.from_records(GRID, records, day_count=1)

        curve = unicity_curve(ts, [1, 4], trials=5, seed=0)

        assert curve.excluded_users == 1
        assert [row["m"] for row in curve.as_rows()] == [1, 4]

    @pytest.mark.parametrize("ms,trials", [([], 10), ([0], 10), ([1], 0), ([100], 10)])
    def test_invalid_arguments(self, random_traces, ms, trials):
        """Test empty ms, m < 1, trials < 1 and no eligible user."""
        with pytest.raises(ValidationError):
            unicity_curve(random_traces, ms, trials=trials, seed=0)
