"""Event detection at a venue cell from daily visitor counts."""

from typing import List, Tuple

import numpy as np

from src.exceptions import CellNotVisitedError, ValidationError
from src.traces.grid import Cell
from src.traces.store import TraceSet
from src.utils.logger import get_logger

logger = get_logger(__name__)


def daily_cell_visitors(ts: TraceSet, cell: Cell) -> np.ndarray:
    """Distinct users at cell on each day, shape (D,)."""
    x, y = ts.grid.require(cell)
    positions = ts.sample_positions(y * ts.grid.width + x)
    users = ts.user_positions[positions]
    days = ts.days[positions]
    pairs = np.unique(users * ts.day_count + days)
    return np.bincount(pairs % ts.day_count, minlength=ts.day_count)


def detect_activity_spikes(
    ts: TraceSet, cell: Cell, threshold: float = 3.0
) -> List[Tuple[int, int]]:
    """
    Days whose visitor count at cell exceeds threshold x the daily median.

    The median runs over all D days, zero-visitor days included, and is
    floored at one visitor so a mostly idle cell does not flag every
    visited day.

    Args:
        ts: Trajectories
        cell: Venue cell
        threshold: Multiplier, > 1

    Returns:
        (day, count) pairs, count descending, ties by day ascending

    Raises:
        ValidationError: If threshold <= 1
        CellOutOfGridError: If cell lies outside the grid
        CellNotVisitedError: If nobody ever visited cell
    """
    if threshold <= 1:
        raise ValidationError("must be > 1", field="threshold")

    counts = daily_cell_visitors(ts, cell)
    if not counts.any():
        raise CellNotVisitedError(cell)

    median = float(np.median(counts))
    cutoff = threshold * max(median, 1.0)
    days = np.flatnonzero(counts > cutoff)
    order = np.lexsort((days, -counts[days]))
    spikes = [(int(days[i]), int(counts[days[i]])) for i in order]

    logger.info(
        "activity_spikes_detected",
        cell=list(cell),
        median=median,
        threshold=threshold,
        spikes=len(spikes),
    )
    return spikes
