"""
Unit tests for the toolkit exception hierarchy.

Tests messages, attributes and the exit code each error maps to.
"""

import pytest

from src.exceptions import (
    EXIT_DEGENERACY,
    EXIT_INTERNAL,
    EXIT_VALIDATION,
    AlignmentError,
    AmbiguousWeekdayError,
    CalendarCoverageError,
    CatalogFormatError,
    CellNotVisitedError,
    CellOutOfGridError,
    CorrelationUndefinedError,
    DegeneracyError,
    DegenerateClusteringError,
    LambertWDomainError,
    ToolkitError,
    TraceFormatError,
    ValidationError,
)


class TestToolkitError:
    """Test base ToolkitError exception."""

    def test_basic_initialization(self):
        """Test message and default exit code."""
        error = ToolkitError("boom")

        assert str(error) == "boom"
        assert error.message == "boom"
        assert error.exit_code == EXIT_INTERNAL

    def test_exit_code_override(self):
        """Test the exit code can be overridden per instance."""
        assert ToolkitError("boom", exit_code=EXIT_VALIDATION).exit_code == EXIT_VALIDATION

    def test_is_exception(self):
        """Test that ToolkitError is an Exception."""
        assert isinstance(ToolkitError("x"), Exception)


class TestValidationErrors:
    """Test the validation branch of the hierarchy."""

    def test_field_prefix(self):
        """Test the offending field prefixes the message."""
        error = ValidationError("must be > 0", field="epsilon")

        assert error.field == "epsilon"
        assert error.message == "epsilon: must be > 0"
        assert error.exit_code == EXIT_VALIDATION

    @pytest.mark.parametrize("cls", [TraceFormatError, CatalogFormatError])
    def test_line_numbers(self, cls):
        """Test format errors report the 1-based line."""
        error = cls("bad row", line=3)

        assert error.line == 3
        assert error.message == "line 3: bad row"
        assert isinstance(error, ValidationError)

    def test_cell_errors(self):
        """Test cell errors keep the cell as a tuple."""
        outside = CellOutOfGridError([200, 1], 200, 200)
        unvisited = CellNotVisitedError((4, 5))

        assert outside.cell == (200, 1)
        assert "200x200" in outside.message
        assert unvisited.cell == (4, 5)
        assert unvisited.exit_code == EXIT_VALIDATION

    def test_calendar_coverage_is_validation(self):
        """Test a calendar gap is an input problem."""
        assert CalendarCoverageError("gap").exit_code == EXIT_VALIDATION


class TestDegeneracyErrors:
    """Test the degeneracy branch of the hierarchy."""

    @pytest.mark.parametrize(
        "cls",
        [CorrelationUndefinedError, DegenerateClusteringError, AlignmentError, LambertWDomainError],
    )
    def test_exit_code(self, cls):
        """Test every degeneracy exits with code 3."""
        error = cls("undefined")

        assert isinstance(error, DegeneracyError)
        assert error.exit_code == EXIT_DEGENERACY

    def test_ambiguous_weekday(self):
        """Test the tied candidates are kept."""
        error = AmbiguousWeekdayError([0, 3])

        assert error.candidates == [0, 3]
        assert "[0, 3]" in error.message
        assert error.exit_code == EXIT_DEGENERACY
