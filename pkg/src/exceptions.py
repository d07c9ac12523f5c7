"""
Exception hierarchy for the gridtrace toolkit.

Every error raised by the toolkit derives from ToolkitError and carries the
process exit code the CLI reports for it:

    2  input validation (bad files, bad parameters, out-of-grid cells)
    3  computational degeneracy (undefined correlation, empty cluster, ...)
    4  internal error (anything not covered by this hierarchy)
"""

from typing import Optional, Sequence

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DEGENERACY = 3
EXIT_INTERNAL = 4


class ToolkitError(Exception):
    """
    Base exception for all toolkit errors.

    Use this for catching any error raised deliberately by gridtrace code.
    """

    exit_code: int = EXIT_INTERNAL

    def __init__(self, message: str, exit_code: Optional[int] = None) -> None:
        """
        Initialize ToolkitError.

        Args:
            message: Error description
            exit_code: Optional override of the class exit code
        """
        self.message = message
        if exit_code is not None:
            self.exit_code = exit_code
        super().__init__(self.message)


class ValidationError(ToolkitError):
    """
    Raised when user-supplied input is invalid.

    This is a client-side error: the same input will always fail.

    Example:
        >>> raise ValidationError("must be positive", field="epsilon")
    """

    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        """
        Initialize ValidationError.

        Args:
            message: Error description
            field: Optional name of the offending field
        """
        self.field = field

        if field:
            message = f"{field}: {message}"

        super().__init__(message)


class TraceFormatError(ValidationError):
    """
    Raised when a trace file row is malformed, out of range, or duplicated.

    Attributes:
        line: 1-based line (row) number of the first offending row

    Example:
        >>> raise TraceFormatError("x=200 outside [0, 199]", line=3)
    """

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CatalogFormatError(ValidationError):
    """Raised when a raster, holiday, or POI file cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CellOutOfGridError(ValidationError):
    """Raised when a cell coordinate lies outside the grid."""

    def __init__(self, cell: Sequence[int], width: int, height: int) -> None:
        self.cell = tuple(int(c) for c in cell)
        super().__init__(
            f"cell {self.cell} outside grid {width}x{height}", field="cell"
        )


class CellNotVisitedError(ValidationError):
    """Raised when an operation needs a cell that no user ever visited."""

    def __init__(self, cell: Sequence[int]) -> None:
        self.cell = tuple(int(c) for c in cell)
        super().__init__(f"cell {self.cell} was never visited", field="cell")


class CalendarCoverageError(ValidationError):
    """Raised when a holiday calendar does not cover the search window."""


class TransformError(ValidationError):
    """Raised when a transform cannot be applied to a field (e.g. rotating a non-square grid)."""


class InfeasibleConfigError(ValidationError):
    """Raised when a generator configuration cannot produce the requested structure."""


class DegeneracyError(ToolkitError):
    """
    Raised when a computation is mathematically undefined on valid input.

    Example:
        >>> raise DegeneracyError("all block sums are equal")
    """

    exit_code = EXIT_DEGENERACY


class CorrelationUndefinedError(DegeneracyError):
    """Raised when a rank correlation has fewer than two points or zero variance."""


class DegenerateClusteringError(DegeneracyError):
    """Raised when 2-means clustering cannot produce two non-empty classes."""


class AmbiguousWeekdayError(DegeneracyError):
    """
    Raised when two weekday hypotheses tie on both violation counts.

    Attributes:
        candidates: The tied weekday indices (0=Monday .. 6=Sunday)
    """

    def __init__(self, candidates: Sequence[int]) -> None:
        self.candidates = list(candidates)
        super().__init__(f"weekday of day 0 is ambiguous between {self.candidates}")


class AlignmentError(DegeneracyError):
    """Raised when the raster sampler cannot produce a field at a candidate center."""


class TemplateIndistinguishableError(DegeneracyError):
    """Raised when synthetic city templates cannot be made pairwise distinguishable."""


class LambertWDomainError(DegeneracyError):
    """Raised when the lower Lambert-W branch is evaluated outside [-1/e, 0)."""
