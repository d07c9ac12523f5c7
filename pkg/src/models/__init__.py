"""Pydantic models for reports, sidecars and error payloads."""

from src.models.reports import (
    WEEKDAY_NAMES,
    AlignmentStep,
    ArtifactEntry,
    CandidateDate,
    ErrorResponse,
    GeoAlignment,
    GroundTruth,
    Manifest,
    MatchResult,
    Provenance,
    RiskReport,
    ScoreEntry,
    TemporalResult,
    UtilityReport,
    WeekdayHypothesis,
    WeekdayInference,
)

__all__ = [
    # Errors
    "ErrorResponse",
    # Spatial
    "AlignmentStep",
    "GeoAlignment",
    "MatchResult",
    "ScoreEntry",
    # Temporal
    "WEEKDAY_NAMES",
    "CandidateDate",
    "TemporalResult",
    "WeekdayHypothesis",
    "WeekdayInference",
    # Metrics and utility
    "Provenance",
    "RiskReport",
    "UtilityReport",
    # Synthetic runs and manifests
    "ArtifactEntry",
    "GroundTruth",
    "Manifest",
]
