"""Per-day activity profiles over selected cells."""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from src.exceptions import ValidationError
from src.traces.grid import Cell
from src.traces.store import BINS_PER_DAY, TraceSet

# Half-hour bins used to select residential and work-area cells.
HOME_BINS = tuple(range(44, 48)) + tuple(range(0, 12))
WORK_BINS = tuple(range(18, 34))


@dataclass(frozen=True)
class DayProfile:
    """Distinct users per half-hour bin on one day, over a cell set."""

    day: int
    counts: np.ndarray

    def __post_init__(self) -> None:
        if self.counts.shape != (BINS_PER_DAY,):
            raise ValidationError(f"profile needs {BINS_PER_DAY} entries", field="profile")


def _bin_mask(ts: TraceSet, bins: Optional[Iterable[int]]) -> np.ndarray:
    if bins is None:
        return np.ones(ts.n_samples, dtype=bool)
    selected = np.zeros(BINS_PER_DAY, dtype=bool)
    selected[list(bins)] = True
    return selected[ts.bins]


def top_cells(
    ts: TraceSet, n: int, bins: Optional[Iterable[int]] = None
) -> List[Cell]:
    """
    The n cells with most distinct visitors, descending.

    Ties break by (x, y) lexicographically.

    Args:
        ts: Trajectories
        n: Number of cells
        bins: Only count samples in these half-hour bins

    Raises:
        ValidationError: If n < 1 or n exceeds the number of visited cells

    Example:
        >>> top_cells(ts, 10, bins=HOME_BINS)
        [(82, 135), (77, 135), ...]
    """
    if n < 1:
        raise ValidationError("must be >= 1", field="n")

    grid = ts.grid
    if bins is None:
        counts = np.asarray(ts.visitor_counts)
    else:
        mask = _bin_mask(ts, bins)
        pairs = np.unique(ts.user_positions[mask] * grid.n_cells + ts.cell_indices[mask])
        counts = np.bincount(pairs % grid.n_cells, minlength=grid.n_cells)

    visited = np.flatnonzero(counts)
    if n > visited.size:
        raise ValidationError(f"only {visited.size} visited cells, asked for {n}", field="n")

    xs, ys = grid.unflatten(visited)
    order = np.lexsort((grid.lex_key(xs, ys), -counts[visited]))[:n]
    return [(int(xs[i]), int(ys[i])) for i in order]


def day_profiles(ts: TraceSet, cells: Sequence[Cell]) -> List[DayProfile]:
    """
    One 48-bin profile per day: distinct users seen in any of cells per bin.

    Raises:
        ValidationError: If cells is empty
        CellOutOfGridError: If a cell lies outside the grid
    """
    if not cells:
        raise ValidationError("cell set must not be empty", field="cells")

    grid = ts.grid
    selected = np.zeros(grid.n_cells, dtype=bool)
    for cell in cells:
        x, y = grid.require(cell)
        selected[y * grid.width + x] = True

    mask = selected[ts.cell_indices]
    slots = ts.slots[mask]
    n_slots = ts.day_count * BINS_PER_DAY
    pairs = np.unique(ts.user_positions[mask] * n_slots + slots)
    counts = np.bincount(pairs % n_slots, minlength=n_slots).reshape(ts.day_count, BINS_PER_DAY)
    return [DayProfile(day=d, counts=counts[d].astype(np.float64)) for d in range(ts.day_count)]


def profile_matrix(profiles: Sequence[DayProfile]) -> np.ndarray:
    """Stack profiles into a (days, 48) array, ordered as given."""
    return np.vstack([p.counts for p in profiles]) if profiles else np.zeros((0, BINS_PER_DAY))


def daily_activity(ts: TraceSet) -> np.ndarray:
    """Distinct users observed anywhere on each day, shape (D,)."""
    pairs = np.unique(ts.user_positions * ts.day_count + ts.days)
    return np.bincount(pairs % ts.day_count, minlength=ts.day_count)
