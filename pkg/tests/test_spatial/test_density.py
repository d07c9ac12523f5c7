"""Unit tests for density fields."""

import numpy as np
import pytest

from src.exceptions import ValidationError
from src.spatial.density import DensityField, apply_transform, density_field
from src.spatial.transforms import DihedralTransform
from src.traces.grid import GridSpec
from src.traces.store import TraceSet


@pytest.fixture
def traces():
    """Two users on a 4x3 grid over three days."""
    return TraceSet.from_records(
        GridSpec(width=4, height=3),
        [
            (1, 0, 0, 3, 2),
            (1, 0, 1, 3, 2),
            (1, 2, 0, 0, 0),
            (2, 1, 0, 3, 2),
            (2, 1, 5, 1, 0),
        ],
        day_count=3,
    )


class TestDensityField:
    """Test suite for density_field."""

    def test_visits(self, traces):
        """Test visit mode counts samples per [x, y] cell."""
        field = density_field(traces)

        assert field.shape == (4, 3)
        assert field.values[3, 2] == 3
        assert field.values[0, 0] == 1
        assert field.total == traces.n_samples

    def test_unique_users(self, traces):
        """Test unique-user mode counts distinct users per cell."""
        field = density_field(traces, mode="unique_users")

        assert field.values[3, 2] == 2
        assert field.total == 4

    def test_day_range(self, traces):
        """Test a half-open day range filters samples."""
        field = density_field(traces, days=(1, 3))

        assert field.values[3, 2] == 1
        assert field.values[0, 0] == 1
        assert field.total == 3
        assert field.days == (1, 3)

    @pytest.mark.parametrize("days", [(2, 2), (-1, 1), (0, 4)])
    def test_bad_day_range(self, traces, days):
        """Test empty or out-of-range day windows are rejected."""
        with pytest.raises(ValidationError):
            density_field(traces, days=days)

    def test_unknown_mode(self, traces):
        """Test unknown modes are rejected."""
        with pytest.raises(ValidationError):
            density_field(traces, mode="dwell")

    def test_negative_values_rejected(self):
        """Test DensityField enforces non-negativity."""
        with pytest.raises(ValidationError):
            DensityField(np.array([[1.0, -2.0]]))

    def test_apply_transform_preserves_total(self, traces):
        """Test transforms keep the field mass."""
        field = density_field(traces)
        moved = apply_transform(field, DihedralTransform.FLIP_BOTH)

        assert moved.total == field.total
        assert moved.values[0, 0] == field.values[3, 2]
