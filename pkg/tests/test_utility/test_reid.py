"""Unit tests for home-work re-identification after sanitization."""

import numpy as np
import pytest

from src.exceptions import ValidationError
from src.traces.grid import GridSpec
from src.traces.store import TraceSet
from src.utility.reid import anchor_reid_rate, empirical_cdf

GRID = GridSpec(width=6, height=6)


@pytest.fixture
def commuters():
    """Six users with home on row 1 and work on row 4."""
    records = []
    for uid in range(6):
        for day in range(2):
            records += [(uid, day, 2, uid, 1), (uid, day, 46, uid, 1), (uid, day, 20, uid, 4)]
    return TraceSet.from_records(GRID, records, day_count=2)


class TestAnchorReidRate:
    """Test suite for anchor_reid_rate."""

    def test_unchanged_release(self, commuters):
        """Test identical sets re-identify everyone."""
        result = anchor_reid_rate(commuters, commuters)

        assert result.rate == 1.0
        assert result.within_one_rate == 1.0
        assert result.home_errors.tolist() == [0.0] * 6
        assert result.excluded_users == 0

    def test_one_cell_shift(self, commuters):
        """Test a one-cell shift breaks exact matches but not within-one matches."""
        shifted = commuters.with_cells(np.clip(commuters.xs + 1, 0, 5), commuters.ys + 1)
        result = anchor_reid_rate(commuters, shifted)

        assert result.rate == 0.0
        assert result.within_one_rate == 1.0
        assert result.work_errors.tolist() == pytest.approx([np.sqrt(2)] * 5 + [1.0])

    def test_within_one_boundary(self, commuters):
        """Test the within-one rate tolerates one cell but not two."""
        shifted = commuters.with_cells(commuters.xs, commuters.ys - 1 + 2 * (commuters.ys == 1))
        result = anchor_reid_rate(commuters, shifted)

        assert result.rate == 0.0
        assert result.within_one_rate == 1.0

        moved = commuters.with_cells(commuters.xs, (commuters.ys + 2) % 6)
        assert anchor_reid_rate(commuters, moved).within_one_rate == 0.0

    def test_user_mismatch(self, commuters):
        """Test both sets must hold the same users."""
        other = TraceSet.from_records(GRID, [(99, 0, 2, 0, 0), (99, 0, 20, 0, 0)], day_count=2)
        with pytest.raises(ValidationError):
            anchor_reid_rate(commuters, other)

    def test_no_complete_anchors(self):
        """Test users without work anchors cannot be compared."""
        ts = TraceSet.from_records(GRID, [(1, 0, 2, 0, 0)], day_count=1)
        with pytest.raises(ValidationError):
            anchor_reid_rate(ts, ts)


class TestEmpiricalCdf:
    """Test suite for empirical_cdf."""

    def test_steps(self):
        """Test sorted values with i / n steps."""
        values, shares = empirical_cdf(np.array([3.0, 1.0, 2.0]))

        assert values.tolist() == [1.0, 2.0, 3.0]
        assert shares.tolist() == pytest.approx([1 / 3, 2 / 3, 1.0])

    def test_empty(self):
        """Test an empty input gives empty arrays."""
        values, shares = empirical_cdf(np.array([]))
        assert values.size == 0 and shares.size == 0
