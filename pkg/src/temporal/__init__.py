"""Temporal re-identification.

This package provides:
- Residential cell selection and per-day activity profiles
- Working / non-working day classification
- Weekday inference and holiday-calendar matching
- Venue event (activity spike) detection
"""

from src.temporal.calendar import (
    DEFAULT_WINDOW,
    day_class_table,
    infer_weekday_offset,
    match_calendar,
)
from src.temporal.classify import NON_WORKING, WORKING, DayClassification, classify_days
from src.temporal.profiles import (
    HOME_BINS,
    WORK_BINS,
    DayProfile,
    daily_activity,
    day_profiles,
    profile_matrix,
    top_cells,
)
from src.temporal.spikes import daily_cell_visitors, detect_activity_spikes

__all__ = [
    # Profiles
    "HOME_BINS",
    "WORK_BINS",
    "DayProfile",
    "top_cells",
    "day_profiles",
    "profile_matrix",
    "daily_activity",
    # Classification
    "NON_WORKING",
    "WORKING",
    "DayClassification",
    "classify_days",
    # Calendar
    "DEFAULT_WINDOW",
    "infer_weekday_offset",
    "match_calendar",
    "day_class_table",
    # Spikes
    "daily_cell_visitors",
    "detect_activity_spikes",
]
