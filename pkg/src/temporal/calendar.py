"""
Calendar recovery: weekday of day 0 and start date.

The weekday is chosen by scoring all seven hypotheses against the A/B
day labels. The start date is pinned by scanning a date window for starts
whose weekday-holiday pattern agrees with the suspected holidays.
"""

from datetime import date, timedelta
from typing import Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from src.exceptions import AmbiguousWeekdayError, CalendarCoverageError, ValidationError
from src.models.reports import (
    WEEKDAY_NAMES,
    CandidateDate,
    TemporalResult,
    WeekdayHypothesis,
    WeekdayInference,
)
from src.temporal.classify import NON_WORKING, WORKING, DayClassification
from src.traces.catalogs import HolidayCalendar
from src.utils.logger import get_logger

logger = get_logger(__name__)

MIN_LABELED_DAYS = 14
DEFAULT_WINDOW = (date(2015, 1, 1), date(2024, 4, 18))


def _weekday(weekday_of_day0: int, day: int) -> int:
    return (weekday_of_day0 + day) % 7


def infer_weekday_offset(labels: Sequence[str]) -> WeekdayInference:
    """
    Pick the weekday of day 0 that best explains the A/B labels.

    For each hypothesis, a hard violation is a Saturday or Sunday labelled
    B and a soft anomaly is a Monday-Friday labelled A. The winner has the
    fewest hard violations, then the fewest soft anomalies.

    Args:
        labels: "A" or "B" for days 0..n-1

    Returns:
        WeekdayInference with holiday_days = the winner's soft anomalies

    Raises:
        ValidationError: With fewer than 14 labels or unknown labels
        AmbiguousWeekdayError: If the best hypotheses tie on both counts
    """
    labels = [str(label) for label in labels]
    if len(labels) < MIN_LABELED_DAYS:
        raise ValidationError(
            f"need >= {MIN_LABELED_DAYS} labeled days, got {len(labels)}", field="labels"
        )
    unknown = sorted(set(labels) - {NON_WORKING, WORKING})
    if unknown:
        raise ValidationError(f"unknown labels {unknown}", field="labels")

    ranking = []
    for weekday in range(7):
        hard = soft = 0
        for day, label in enumerate(labels):
            weekend = _weekday(weekday, day) >= 5
            hard += weekend and label == WORKING
            soft += (not weekend) and label == NON_WORKING
        ranking.append(
            WeekdayHypothesis(weekday=weekday, hard_violations=hard, soft_anomalies=soft)
        )
    ranking.sort(key=lambda h: (h.hard_violations, h.soft_anomalies, h.weekday))

    best = ranking[0]
    tied = [
        h.weekday
        for h in ranking
        if (h.hard_violations, h.soft_anomalies) == (best.hard_violations, best.soft_anomalies)
    ]
    if len(tied) > 1:
        raise AmbiguousWeekdayError(tied)

    holiday_days = [
        day
        for day, label in enumerate(labels)
        if label == NON_WORKING and _weekday(best.weekday, day) < 5
    ]
    logger.info(
        "weekday_inferred",
        weekday_of_day0=WEEKDAY_NAMES[best.weekday],
        hard_violations=best.hard_violations,
        holiday_days=holiday_days,
    )
    return WeekdayInference(
        weekday_of_day0=best.weekday,
        holiday_days=holiday_days,
        hard_violations=best.hard_violations,
        soft_anomalies=best.soft_anomalies,
        ranking=ranking,
    )


def match_calendar(
    weekday_of_day0: int,
    holiday_days: Iterable[int],
    calendar: HolidayCalendar,
    window: Tuple[date, date] = DEFAULT_WINDOW,
    day_count: int = 75,
    tolerance: int = 0,
    bidirectional: bool = True,
) -> TemporalResult:
    """
    Find every start date consistent with the suspected holidays.

    A start date s in window with weekday(s) == weekday_of_day0 is accepted
    iff (i) at most ``tolerance`` suspected days fail to land on a calendar
    holiday, and (ii) with ``bidirectional``, every Monday-Friday calendar
    holiday in [s, s + day_count) is a suspected day.

    Args:
        weekday_of_day0: 0=Monday .. 6=Sunday
        holiday_days: Suspected holiday day indices, all Monday-Friday
        calendar: Holiday calendar covering window plus day_count days
        window: Inclusive (earliest, latest) start dates
        day_count: Days in the release
        tolerance: Suspected days allowed to miss the calendar
        bidirectional: Enforce constraint (ii)

    Raises:
        ValidationError: On an empty window or suspected days that are
            out of range or fall on a weekend
        CalendarCoverageError: If the calendar does not cover the search span

    Example:
        >>> result = match_calendar(6, [1, 8, 29, 37, 50], load_holidays())
        >>> result.candidate_start_dates
        [datetime.date(2019, 9, 15)]
    """
    earliest, latest = window
    if latest < earliest:
        raise ValidationError(f"empty window {earliest}..{latest}", field="window")
    if not 0 <= weekday_of_day0 <= 6:
        raise ValidationError("must be in 0..6", field="weekday_of_day0")
    if tolerance < 0:
        raise ValidationError("must be >= 0", field="tolerance")

    suspected = sorted({int(d) for d in holiday_days})
    for day in suspected:
        if not 0 <= day < day_count:
            raise ValidationError(f"day {day} outside [0, {day_count})", field="holiday_days")
        if _weekday(weekday_of_day0, day) >= 5:
            raise ValidationError(
                f"day {day} is a {WEEKDAY_NAMES[_weekday(weekday_of_day0, day)]}",
                field="holiday_days",
            )

    span_end = latest + timedelta(days=day_count - 1)
    if not calendar.covers(earliest, span_end):
        raise CalendarCoverageError(
            f"calendar covers {calendar.coverage_start}..{calendar.coverage_end}, "
            f"search needs {earliest}..{span_end}"
        )

    suspected_set = set(suspected)
    weekday_holidays = calendar.weekday_holidays()
    first = earliest + timedelta(days=(weekday_of_day0 - earliest.weekday()) % 7)

    candidates: List[CandidateDate] = []
    start = first
    while start <= latest:
        matched = {}
        unmatched = []
        for day in suspected:
            name = calendar.name(start + timedelta(days=day))
            if name is None:
                unmatched.append(day)
            else:
                matched[day] = name

        accepted = len(unmatched) <= tolerance
        if accepted and bidirectional:
            stop = start + timedelta(days=day_count)
            accepted = all(
                (h - start).days in suspected_set for h in weekday_holidays if start <= h < stop
            )
        if accepted:
            candidates.append(
                CandidateDate(start_date=start, holiday_names=matched, unmatched_days=unmatched)
            )
        start += timedelta(days=7)

    result = TemporalResult(
        weekday_of_day0=weekday_of_day0,
        weekday_name=WEEKDAY_NAMES[weekday_of_day0],
        holiday_days=suspected,
        candidates=candidates,
        unique=len(candidates) == 1,
        window_start=earliest,
        window_end=latest,
        day_count=day_count,
        tolerance=tolerance,
        bidirectional=bidirectional,
    )
    logger.info(
        "calendar_matched",
        candidates=len(candidates),
        unique=result.unique,
        first_candidate=str(candidates[0].start_date) if candidates else None,
    )
    return result


def day_class_table(
    classification: DayClassification,
    weekday_of_day0: int,
    start_date: Optional[date] = None,
    calendar: Optional[HolidayCalendar] = None,
) -> pd.DataFrame:
    """
    Day-class table with columns day, class, weekday, date, holiday.

    ``date`` and ``holiday`` are empty strings when no start date (or no
    calendar) is given.
    """
    rows = []
    for day, label in sorted(zip(classification.days.tolist(), classification.labels.tolist())):
        when = start_date + timedelta(days=day) if start_date is not None else None
        holiday = calendar.name(when) if (calendar is not None and when is not None) else None
        rows.append(
            {
                "day": day,
                "class": label,
                "weekday": WEEKDAY_NAMES[_weekday(weekday_of_day0, day)],
                "date": when.isoformat() if when else "",
                "holiday": holiday or "",
            }
        )
    return pd.DataFrame(rows, columns=["day", "class", "weekday", "date", "holiday"])
