"""
reid-time: recover the calendar of a release.

top_cells -> day_profiles -> classify_days -> infer_weekday_offset ->
match_calendar, plus the per-day class table, daily activity and optional
venue spike reports.
"""

from datetime import date
from pathlib import Path
from typing import List, Literal, Optional, Tuple

import pandas as pd
from pydantic import Field, field_validator, model_validator

from src.commands.artifacts import ArtifactWriter
from src.commands.base import SeededOptions, arg, command, parse_pair, require_file
from src.temporal.calendar import (
    DEFAULT_WINDOW,
    day_class_table,
    infer_weekday_offset,
    match_calendar,
)
from src.temporal.classify import classify_days
from src.temporal.profiles import HOME_BINS, daily_activity, day_profiles, top_cells
from src.temporal.spikes import daily_cell_visitors, detect_activity_spikes
from src.traces.catalogs import load_holidays
from src.traces.store import load_traceset
from src.utils.logger import get_logger

logger = get_logger(__name__)


class ReidTimeInput(SeededOptions):
    """Inputs of reid-time; the seed drives k-means initialisation."""

    traces: Path = Field(..., description="Trace CSV")
    calendar: Optional[Path] = Field(None, description="Holiday CSV; bundled JP calendar if unset")
    top_cells: int = Field(50, ge=1, description="Cells whose profiles are clustered")
    selection: Literal["residential", "all"] = Field("residential")
    normalization: Literal["per_bin", "per_day"] = Field("per_bin")
    n_init: int = Field(50, ge=1)
    window_start: date = Field(DEFAULT_WINDOW[0])
    window_end: date = Field(DEFAULT_WINDOW[1])
    tolerance: int = Field(0, ge=0)
    one_way: bool = Field(False, description="Only require suspected days to be holidays")
    venues: List[str] = Field(default_factory=list, description="Venue cells X,Y for spikes")
    spike_threshold: float = Field(3.0, gt=1.0)

    @field_validator("venues")
    @classmethod
    def check_venues(cls, value: List[str]) -> List[str]:
        for venue in value:
            parse_pair(venue, "venues")
        return value

    @model_validator(mode="after")
    def check_window(self) -> "ReidTimeInput":
        if self.window_end < self.window_start:
            raise ValueError("window_end precedes window_start")
        return self

    @property
    def venue_cells(self) -> List[Tuple[int, int]]:
        return [parse_pair(v, "venues") for v in self.venues]


@command(
    "reid-time",
    ReidTimeInput,
    "Classify days and match the release to a holiday calendar",
    arguments=(
        arg("--traces", required=True),
        arg("--calendar"),
        arg("--top-cells", type=int),
        arg("--selection", choices=["residential", "all"]),
        arg("--normalization", choices=["per_bin", "per_day"]),
        arg("--n-init", type=int),
        arg("--window-start"),
        arg("--window-end"),
        arg("--tolerance", type=int),
        arg("--one-way", action="store_true"),
        arg("--venues", nargs="+"),
        arg("--spike-threshold", type=float),
    ),
)
def reid_time(params: ReidTimeInput, writer: ArtifactWriter) -> None:
    """Write temporal.json, days.csv, activity.csv and spikes.csv."""
    grid = params.grid_spec
    ts = load_traceset(require_file(params.traces, "traces"), grid, params.day_count)
    calendar_path = require_file(params.calendar, "calendar") if params.calendar else None
    calendar = load_holidays(calendar_path)

    bins = HOME_BINS if params.selection == "residential" else None
    cells = top_cells(ts, params.top_cells, bins=bins)
    profiles = day_profiles(ts, cells)
    classification = classify_days(
        profiles, params.seed, normalization=params.normalization, n_init=params.n_init
    )
    inference = infer_weekday_offset(classification.label_sequence())
    result = match_calendar(
        inference.weekday_of_day0,
        inference.holiday_days,
        calendar,
        window=(params.window_start, params.window_end),
        day_count=ts.day_count,
        tolerance=params.tolerance,
        bidirectional=not params.one_way,
    )
    writer.json("temporal.json", result)
    writer.json("weekday.json", inference)

    start = result.candidates[0].start_date if result.unique else None
    writer.csv(
        "days.csv",
        day_class_table(classification, inference.weekday_of_day0, start, calendar),
    )
    writer.csv(
        "activity.csv",
        pd.DataFrame({"day": range(ts.day_count), "users": daily_activity(ts)}),
    )

    if params.venues:
        rows = []
        for x, y in params.venue_cells:
            visitors = daily_cell_visitors(ts, (x, y))
            spikes = dict(detect_activity_spikes(ts, (x, y), params.spike_threshold))
            for day in range(ts.day_count):
                rows.append(
                    {
                        "x": x,
                        "y": y,
                        "day": day,
                        "visitors": int(visitors[day]),
                        "spike": day in spikes,
                    }
                )
        writer.csv("spikes.csv", rows, columns=["x", "y", "day", "visitors", "spike"])

    logger.info(
        "reid_time_completed",
        weekday_of_day0=result.weekday_name,
        holiday_days=result.holiday_days,
        candidates=len(result.candidates),
        unique=result.unique,
    )
