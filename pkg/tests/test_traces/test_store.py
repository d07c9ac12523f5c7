"""Unit tests for the trajectory store."""

import numpy as np
import pytest

from src.exceptions import CellOutOfGridError, TraceFormatError, ValidationError
from src.traces.grid import GridSpec
from src.traces.store import (
    TraceSet,
    load_traceset,
    summarize,
    unique_visitors,
    write_traceset,
)

GRID = GridSpec(width=4, height=4)


@pytest.fixture
def traces():
    """Three users over two days on a 4x4 grid."""
    return TraceSet.from_records(
        GRID,
        [
            (2, 0, 5, 1, 1),
            (1, 1, 0, 0, 0),
            (1, 0, 3, 2, 3),
            (1, 0, 1, 1, 1),
            (3, 1, 47, 3, 3),
        ],
        day_count=2,
    )


class TestTraceSet:
    """Test suite for TraceSet construction and indexing."""

    def test_samples_sorted_by_user_day_bin(self, traces):
        """Test samples are reordered by (user, day, bin)."""
        assert traces.users.tolist() == [1, 1, 1, 2, 3]
        assert traces.days.tolist() == [0, 0, 1, 0, 1]
        assert traces.bins.tolist() == [1, 3, 0, 5, 47]

    def test_counts(self, traces):
        """Test user and sample counts."""
        assert traces.n_users == 3
        assert traces.n_samples == 5
        assert traces.samples_per_user.tolist() == [3, 1, 1]
        assert len(traces) == 3

    def test_columns_are_read_only(self, traces):
        """Test columns cannot be mutated in place."""
        with pytest.raises(ValueError):
            traces.xs[0] = 3

    def test_trajectory(self, traces):
        """Test per-user trajectories are sorted views."""
        trajectory = traces.trajectory(1)

        assert len(trajectory) == 3
        assert trajectory.cells == [(1, 1), (2, 3), (0, 0)]
        assert trajectory.samples[0].bin == 1
        assert 2 in traces
        assert 9 not in traces

    def test_unknown_user(self, traces):
        """Test unknown users raise ValidationError."""
        with pytest.raises(ValidationError):
            traces.trajectory(9)

    def test_iteration_in_user_order(self, traces):
        """Test iteration yields users in ascending order."""
        assert [t.user for t in traces] == [1, 2, 3]

    def test_users_in_cell_and_unique_visitors(self, traces):
        """Test the inverted index."""
        traces.build_index()

        assert traces.users_in_cell((1, 1)).tolist() == [1, 2]
        assert unique_visitors(traces, (1, 1)) == 2
        assert unique_visitors(traces, (3, 0)) == 0
        with pytest.raises(CellOutOfGridError):
            unique_visitors(traces, (4, 4))

    def test_visit_counts(self, traces):
        """Test visit and visitor counts per flat cell."""
        flat = GRID.flat_index(np.array([1]), np.array([1]))[0]

        assert traces.visit_counts[flat] == 2
        assert traces.visitor_counts[flat] == 2
        assert traces.visit_counts.sum() == 5

    def test_slots(self, traces):
        """Test absolute slot day * 48 + bin."""
        assert traces.slots.tolist() == [1, 3, 48, 5, 95]

    def test_duplicate_sample_rejected(self):
        """Test a repeated (user, day, bin) names the later line."""
        with pytest.raises(TraceFormatError) as exc_info:
            TraceSet.from_records(GRID, [(1, 0, 1, 0, 0), (2, 0, 1, 0, 0), (1, 0, 1, 3, 3)])

        assert exc_info.value.line == 3

    @pytest.mark.parametrize(
        "record,field",
        [((1, 2, 0, 0, 0), "day"), ((1, 0, 48, 0, 0), "bin"), ((1, 0, 0, 4, 0), "x")],
    )
    def test_out_of_range_rejected(self, record, field):
        """Test out-of-range values name the field and line."""
        with pytest.raises(TraceFormatError) as exc_info:
            TraceSet.from_records(GRID, [(1, 0, 0, 0, 0), record], day_count=2)

        assert exc_info.value.line == 2
        assert field in str(exc_info.value)

    def test_with_cells_keeps_time_columns(self, traces):
        """Test relabeling cells preserves user, day and bin."""
        moved = traces.with_cells(np.zeros(5, dtype=np.int64), np.zeros(5, dtype=np.int64))

        assert moved.users.tolist() == traces.users.tolist()
        assert moved.bins.tolist() == traces.bins.tolist()
        assert set(zip(moved.xs.tolist(), moved.ys.tolist())) == {(0, 0)}

    def test_digest_depends_on_content(self, traces):
        """Test the digest is stable and content-sensitive."""
        same = TraceSet.from_records(GRID, traces.to_frame().to_numpy(), day_count=2)
        moved = traces.with_cells(traces.ys, traces.xs)

        assert traces.digest() == same.digest()
        assert traces.digest() != moved.digest()

    def test_empty(self):
        """Test an empty TraceSet is valid."""
        empty = TraceSet.empty(GRID)

        assert empty.n_users == 0
        assert empty.n_samples == 0


class TestTraceFiles:
    """Test suite for CSV ingestion and emission."""

    def test_load_and_write_are_byte_stable(self, tmp_path, traces):
        """Test writing, loading and writing again reproduces the file."""
        first = write_traceset(traces, tmp_path / "a.csv")
        loaded = load_traceset(first, GRID, day_count=2)
        second = write_traceset(loaded, tmp_path / "b.csv")

        assert first.read_bytes() == second.read_bytes()
        assert first.read_text().splitlines()[0] == "1,0,1,1,1"

    def test_load_malformed_row(self, tmp_path):
        """Test a non-integer field names its line."""
        path = tmp_path / "bad.csv"
        path.write_text("1,0,0,0,0\n1,0,a,0,0\n")

        with pytest.raises(TraceFormatError) as exc_info:
            load_traceset(path, GRID)
        assert exc_info.value.line == 2

    def test_load_wrong_field_count(self, tmp_path):
        """Test rows must have five fields."""
        path = tmp_path / "bad.csv"
        path.write_text("1,0,0,0\n")

        with pytest.raises(TraceFormatError):
            load_traceset(path, GRID)

    def test_load_missing_file(self, tmp_path):
        """Test a missing file raises ValidationError."""
        with pytest.raises(ValidationError):
            load_traceset(tmp_path / "missing.csv", GRID)

    def test_load_empty_file(self, tmp_path):
        """Test an empty file gives an empty TraceSet."""
        path = tmp_path / "empty.csv"
        path.write_text("")

        assert load_traceset(path, GRID).n_samples == 0

    def test_summarize(self, traces):
        """Test the headline summary."""
        summary = summarize(traces)

        assert summary["grid"] == "4x4"
        assert summary["users"] == 3
        assert summary["samples"] == 5
        assert summary["days_observed"] == 2
        assert summary["samples_per_user_min_median_max"] == [1.0, 1.0, 3.0]
