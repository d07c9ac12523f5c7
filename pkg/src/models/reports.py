"""
Pydantic report models emitted by the toolkit.

Every artifact written under ``--out`` that is JSON is one of these models,
serialized with ``model_dump_json``. Models hold no timing or host
information, so identical inputs and seeds give byte-identical files.
"""
from datetime import date
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

WEEKDAY_NAMES = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday")


class ErrorResponse(BaseModel):
    """
    Standardized error payload printed on stderr when a command fails.

    Attributes:
        code: Process exit code (2 validation, 3 degeneracy, 4 internal)
        message: Human-readable error message
        data: Optional additional error context
    """

    code: int = Field(..., ge=1, description="Process exit code")
    message: str = Field(..., min_length=1, description="Human-readable error message")
    data: dict[str, Any] | None = Field(None, description="Additional error context")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "code": 2,
                "message": "line 3: x=200 outside [0, 199]",
                "data": {"error_type": "TraceFormatError"},
            }
        }
    )


# ----------------------------------------------------------------------
# spatial re-identification


class ScoreEntry(BaseModel):
    """One (transform, city) cell of the match score table."""

    city: str
    transform: str
    transform_index: int = Field(..., ge=0, le=7)
    correlation: Optional[float] = Field(
        None, description="Clustered Spearman correlation; None when undefined"
    )
    cell_correlation: Optional[float] = Field(
        None, description="Grid-level Spearman correlation; None when undefined"
    )


class MatchResult(BaseModel):
    """
    Outcome of the transform x city search.

    ``best_transform`` maps the released field onto the matched city.
    """

    best_city: str
    best_transform: str
    best_correlation: float
    margin: Optional[float] = Field(
        None, description="Best minus runner-up defined score; None with a single defined entry"
    )
    city_margin: Optional[float] = Field(
        None, description="Best minus best score of any other city"
    )
    cluster: List[int] = Field(..., min_length=2, max_length=2)
    scores: List[ScoreEntry]

    @model_validator(mode="after")
    def check_table(self) -> "MatchResult":
        defined = [s.correlation for s in self.scores if s.correlation is not None]
        if defined and self.best_correlation < max(defined) - 1e-12:
            raise ValueError("best entry does not attain the table maximum")
        return self


class AlignmentStep(BaseModel):
    lat: float
    lon: float
    correlation: float


class GeoAlignment(BaseModel):
    """Geographic anchor recovered by hill climbing."""

    center_lat: float = Field(..., ge=-90, le=90)
    center_lon: float = Field(..., ge=-180, le=180)
    correlation: float
    initial_correlation: float
    iterations: int = Field(..., ge=0, description="Accepted moves")
    evaluations: int = Field(..., ge=1, description="Sampler rasterizations")
    step_deg: float = Field(..., gt=0)
    restarts: int = Field(0, ge=0)
    path: List[AlignmentStep] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_monotone(self) -> "GeoAlignment":
        if self.correlation < self.initial_correlation - 1e-12:
            raise ValueError("final correlation below initial correlation")
        return self


# ----------------------------------------------------------------------
# temporal re-identification


class WeekdayHypothesis(BaseModel):
    weekday: int = Field(..., ge=0, le=6)
    hard_violations: int = Field(..., ge=0)
    soft_anomalies: int = Field(..., ge=0)


class WeekdayInference(BaseModel):
    """Winning weekday-of-day-0 hypothesis and its holiday days."""

    weekday_of_day0: int = Field(..., ge=0, le=6, description="0=Monday .. 6=Sunday")
    holiday_days: List[int]
    hard_violations: int = Field(..., ge=0)
    soft_anomalies: int = Field(..., ge=0)
    ranking: List[WeekdayHypothesis]

    @property
    def weekday_name(self) -> str:
        return WEEKDAY_NAMES[self.weekday_of_day0]


class CandidateDate(BaseModel):
    start_date: date
    holiday_names: Dict[int, str] = Field(
        default_factory=dict, description="Matched holiday per suspected day index"
    )
    unmatched_days: List[int] = Field(default_factory=list)


class TemporalResult(BaseModel):
    """Calendar recovered for a release."""

    weekday_of_day0: int = Field(..., ge=0, le=6)
    weekday_name: str
    holiday_days: List[int]
    candidates: List[CandidateDate]
    unique: bool
    window_start: date
    window_end: date
    day_count: int = Field(..., ge=1)
    tolerance: int = Field(0, ge=0)
    bidirectional: bool = True

    @property
    def candidate_start_dates(self) -> List[date]:
        return [c.start_date for c in self.candidates]

    @model_validator(mode="after")
    def check_sorted(self) -> "TemporalResult":
        dates = [c.start_date for c in self.candidates]
        if dates != sorted(dates):
            raise ValueError("candidate start dates must be sorted ascending")
        if self.unique != (len(dates) == 1):
            raise ValueError("unique must equal len(candidates) == 1")
        return self


# ----------------------------------------------------------------------
# privacy metrics and utility


class RiskReport(BaseModel):
    """One metric evaluated over its parameter grid."""

    metric: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    seed: Optional[int] = None
    notes: List[str] = Field(default_factory=list)
    extras: Dict[str, Any] = Field(default_factory=dict)


class Provenance(BaseModel):
    """Sidecar describing how a sanitized TraceSet was produced."""

    mechanism: str
    parameters: Dict[str, Any]
    seed: int
    input_digest: str
    counters: Dict[str, int] = Field(default_factory=dict)


class UtilityReport(BaseModel):
    """Privacy-utility sweep, one row per (parameter point, seed)."""

    mechanism: str
    metrics: List[str]
    kl_smoothing: float
    parameter_columns: List[str]
    columns: List[str]
    rows: List[Dict[str, Any]] = Field(default_factory=list)

    def summary(self, value_columns: Optional[List[str]] = None) -> List[Dict[str, Any]]:
        """Per-parameter mean and 95% normal band over seeds."""
        from src.utility.sweep import summarize_rows

        return summarize_rows(self, value_columns)


# ----------------------------------------------------------------------
# synthetic ground truth and manifests


class GroundTruth(BaseModel):
    """Planted quantities of a synthetic run, in released coordinates."""

    template_id: str
    transform: str
    recovery_transform: str
    start_date: date
    weekday_of_day0: int = Field(..., ge=0, le=6)
    holiday_days: List[int]
    working_days: List[int]
    homes: Dict[int, List[int]]
    works: Dict[int, List[int]]
    spike_days: Dict[str, List[int]] = Field(default_factory=dict)
    center_lat: float = Field(..., ge=-90, le=90, description="Planted city center")
    center_lon: float = Field(..., ge=-180, le=180, description="Planted city center")
    config: Dict[str, Any]


class ArtifactEntry(BaseModel):
    path: str
    sha256: str = Field(..., min_length=64, max_length=64)


class Manifest(BaseModel):
    command: str
    artifacts: List[ArtifactEntry]
