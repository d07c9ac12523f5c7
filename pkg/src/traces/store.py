"""
Trajectory store: load, validate, index and expose grid trajectories.

A TraceSet keeps its samples columnar (user, day, bin, x, y) and sorted by
(user, day, bin). The inverted index (cell -> users) and the per-cell
visitor counts are built lazily on first use; call ``build_index()`` before
handing a TraceSet to concurrent workers.

Example:
    >>> grid = GridSpec(width=4, height=4)
    >>> ts = TraceSet.from_records(grid, [(7, 0, 1, 2, 3), (7, 0, 0, 2, 3)])
    >>> ts.n_users, ts.n_samples
    (1, 2)
"""

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.exceptions import TraceFormatError, ValidationError
from src.traces.grid import Cell, GridSpec
from src.utils.digests import arrays_sha256
from src.utils.logger import get_logger

logger = get_logger(__name__)

BINS_PER_DAY = 48
DEFAULT_DAY_COUNT = 75
COLUMNS = ("uid", "day", "bin", "x", "y")

_INTEGER_PATTERN = r"\s*-?\d+\s*"


class Sample(NamedTuple):
    """One observation: day index, half-hour bin and cell."""

    day: int
    bin: int
    cell: Cell


@dataclass(frozen=True)
class Trajectory:
    """
    All samples of one user, sorted by (day, bin).

    Arrays are read-only views into the parent TraceSet.
    """

    user: int
    days: np.ndarray
    bins: np.ndarray
    xs: np.ndarray
    ys: np.ndarray

    def __len__(self) -> int:
        return int(self.days.shape[0])

    @property
    def samples(self) -> List[Sample]:
        return [
            Sample(int(d), int(b), (int(x), int(y)))
            for d, b, x, y in zip(self.days, self.bins, self.xs, self.ys)
        ]

    @property
    def cells(self) -> List[Cell]:
        return [(int(x), int(y)) for x, y in zip(self.xs, self.ys)]


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def _column(values: Sequence[int]) -> np.ndarray:
    array = np.asarray(values, dtype=np.int64).reshape(-1)
    return array.copy() if array.flags.writeable else array


class TraceSet:
    """
    Immutable, validated corpus of grid trajectories.

    Args:
        grid: Grid the cells refer to
        users, days, bins, xs, ys: Equal-length integer columns, one entry per sample
        day_count: Number of days D in the release

    Raises:
        TraceFormatError: On out-of-range values or duplicate (user, day, bin)
            rows; the reported line is the 1-based position in the input order
    """

    def __init__(
        self,
        grid: GridSpec,
        users: Sequence[int],
        days: Sequence[int],
        bins: Sequence[int],
        xs: Sequence[int],
        ys: Sequence[int],
        day_count: int = DEFAULT_DAY_COUNT,
        *,
        presorted: bool = False,
    ) -> None:
        if day_count < 1:
            raise ValidationError("must be >= 1", field="day_count")

        columns = [_column(c) for c in (users, days, bins, xs, ys)]
        lengths = {c.shape[0] for c in columns}
        if len(lengths) != 1:
            raise ValidationError("columns have different lengths", field="traces")

        self.grid = grid
        self.day_count = int(day_count)
        self._validate_ranges(*columns[1:])

        u, d, b, x, y = columns
        if not presorted:
            order = np.lexsort((b, d, u))
            u, d, b, x, y = (c[order] for c in (u, d, b, x, y))
            self._reject_duplicates(u, d, b, order)

        self._users = _readonly(u)
        self._days = _readonly(d)
        self._bins = _readonly(b)
        self._xs = _readonly(x)
        self._ys = _readonly(y)

        self._user_ids, self._starts, self._counts = np.unique(
            u, return_index=True, return_counts=True
        )
        _readonly(self._user_ids)

    # ------------------------------------------------------------------
    # construction helpers

    def _validate_ranges(
        self, days: np.ndarray, bins: np.ndarray, xs: np.ndarray, ys: np.ndarray
    ) -> None:
        checks = [
            ("day", days, self.day_count),
            ("bin", bins, BINS_PER_DAY),
            ("x", xs, self.grid.width),
            ("y", ys, self.grid.height),
        ]
        first_row: Optional[int] = None
        first_message = ""
        for name, values, upper in checks:
            bad = np.flatnonzero((values < 0) | (values >= upper))
            if bad.size and (first_row is None or bad[0] < first_row):
                first_row = int(bad[0])
                first_message = (
                    f"{name}={int(values[bad[0]])} outside [0, {upper - 1}]"
                )
        if first_row is not None:
            raise TraceFormatError(first_message, line=first_row + 1)

    @staticmethod
    def _reject_duplicates(
        users: np.ndarray, days: np.ndarray, bins: np.ndarray, order: np.ndarray
    ) -> None:
        if users.shape[0] < 2:
            return
        same = (users[1:] == users[:-1]) & (days[1:] == days[:-1]) & (bins[1:] == bins[:-1])
        hits = np.flatnonzero(same)
        if hits.size:
            rows = np.maximum(order[hits], order[hits + 1])
            row = int(rows.min())
            i = int(hits[np.argmin(rows)])
            raise TraceFormatError(
                f"duplicate sample for uid={int(users[i])} day={int(days[i])} bin={int(bins[i])}",
                line=row + 1,
            )

    @classmethod
    def from_records(
        cls,
        grid: GridSpec,
        records: Iterable[Sequence[int]],
        day_count: int = DEFAULT_DAY_COUNT,
    ) -> "TraceSet":
        """Build a TraceSet from (uid, day, bin, x, y) tuples."""
        table = np.asarray(list(records), dtype=np.int64).reshape(-1, 5)
        return cls(grid, *table.T, day_count=day_count)

    @classmethod
    def empty(cls, grid: GridSpec, day_count: int = DEFAULT_DAY_COUNT) -> "TraceSet":
        return cls.from_records(grid, [], day_count=day_count)

    def with_cells(self, xs: np.ndarray, ys: np.ndarray) -> "TraceSet":
        """
        Return a copy with relabeled cells and identical user/day/bin columns.

        Used by sanitizers, which perturb space only.
        """
        return TraceSet(
            self.grid,
            self._users,
            self._days,
            self._bins,
            xs,
            ys,
            day_count=self.day_count,
            presorted=True,
        )

    # ------------------------------------------------------------------
    # columns

    @property
    def users(self) -> np.ndarray:
        return self._users

    @property
    def days(self) -> np.ndarray:
        return self._days

    @property
    def bins(self) -> np.ndarray:
        return self._bins

    @property
    def xs(self) -> np.ndarray:
        return self._xs

    @property
    def ys(self) -> np.ndarray:
        return self._ys

    @property
    def user_ids(self) -> np.ndarray:
        return self._user_ids

    @property
    def n_users(self) -> int:
        return int(self._user_ids.shape[0])

    @property
    def n_samples(self) -> int:
        return int(self._users.shape[0])

    @property
    def samples_per_user(self) -> np.ndarray:
        return self._counts

    def __len__(self) -> int:
        return self.n_users

    def __iter__(self) -> Iterator[Trajectory]:
        for position in range(self.n_users):
            yield self._trajectory_at(position)

    def __contains__(self, user: object) -> bool:
        return self.user_position(user) is not None  # type: ignore[arg-type]

    def user_position(self, user: int) -> Optional[int]:
        position = int(np.searchsorted(self._user_ids, user))
        if position < self.n_users and self._user_ids[position] == user:
            return position
        return None

    def user_slice(self, user: int) -> slice:
        position = self.user_position(user)
        if position is None:
            raise ValidationError(f"unknown user {user}", field="user")
        start = int(self._starts[position])
        return slice(start, start + int(self._counts[position]))

    def trajectory(self, user: int) -> Trajectory:
        position = self.user_position(user)
        if position is None:
            raise ValidationError(f"unknown user {user}", field="user")
        return self._trajectory_at(position)

    def _trajectory_at(self, position: int) -> Trajectory:
        start = int(self._starts[position])
        stop = start + int(self._counts[position])
        return Trajectory(
            user=int(self._user_ids[position]),
            days=self._days[start:stop],
            bins=self._bins[start:stop],
            xs=self._xs[start:stop],
            ys=self._ys[start:stop],
        )

    # ------------------------------------------------------------------
    # indices

    @cached_property
    def cell_indices(self) -> np.ndarray:
        return _readonly(self.grid.flat_index(self._xs, self._ys))

    @cached_property
    def user_positions(self) -> np.ndarray:
        """Position of each sample's user in ``user_ids``."""
        return _readonly(np.repeat(np.arange(self.n_users, dtype=np.int64), self._counts))

    @cached_property
    def slots(self) -> np.ndarray:
        """Absolute time slot ``day * 48 + bin`` of each sample."""
        return _readonly(self._days * BINS_PER_DAY + self._bins)

    @cached_property
    def _cell_order(self) -> np.ndarray:
        return _readonly(np.argsort(self.cell_indices, kind="stable"))

    @cached_property
    def _cell_bounds(self) -> np.ndarray:
        sorted_cells = self.cell_indices[self._cell_order]
        return _readonly(
            np.searchsorted(sorted_cells, np.arange(self.grid.n_cells + 1), side="left")
        )

    @cached_property
    def visit_counts(self) -> np.ndarray:
        """Samples per flat cell index."""
        return _readonly(np.bincount(self.cell_indices, minlength=self.grid.n_cells))

    @cached_property
    def visitor_counts(self) -> np.ndarray:
        """Distinct users per flat cell index, s(cell)."""
        n_cells = self.grid.n_cells
        pairs = np.unique(self.user_positions * n_cells + self.cell_indices)
        return _readonly(np.bincount(pairs % n_cells, minlength=n_cells))

    def build_index(self) -> "TraceSet":
        """Materialize every lazy index; safe to share across threads afterwards."""
        _ = (self.cell_indices, self.user_positions, self.slots, self._cell_bounds)
        _ = (self.visit_counts, self.visitor_counts)
        return self

    def sample_positions(self, cell_index: int) -> np.ndarray:
        """Positions of the samples that fall in the given flat cell."""
        lo, hi = self._cell_bounds[cell_index], self._cell_bounds[cell_index + 1]
        return self._cell_order[lo:hi]

    def users_in_cell(self, cell: Cell) -> np.ndarray:
        """Sorted distinct users that ever visited cell, U(cell)."""
        x, y = self.grid.require(cell)
        positions = self.sample_positions(y * self.grid.width + x)
        return np.unique(self._users[positions])

    def digest(self) -> str:
        """Content digest over grid, day count and all columns."""
        header = np.asarray(
            [self.grid.width, self.grid.height, self.day_count], dtype=np.int64
        )
        return arrays_sha256(header, self._users, self._days, self._bins, self._xs, self._ys)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "uid": self._users,
                "day": self._days,
                "bin": self._bins,
                "x": self._xs,
                "y": self._ys,
            }
        )

    def __repr__(self) -> str:
        return (
            f"TraceSet(grid={self.grid.label()}, users={self.n_users}, "
            f"samples={self.n_samples}, day_count={self.day_count})"
        )


def load_traceset(
    path: Path | str, grid: GridSpec, day_count: int = DEFAULT_DAY_COUNT
) -> TraceSet:
    """
    Load a headerless ``uid,d,t,x,y`` CSV into a validated TraceSet.

    Args:
        path: CSV file, one sample per row
        grid: Grid the cell coordinates refer to
        day_count: Number of days in the release

    Returns:
        TraceSet with samples sorted by (uid, day, bin)

    Raises:
        ValidationError: If the file does not exist
        TraceFormatError: On malformed, out-of-range or duplicate rows,
            naming the 1-based line number

    Example:
        >>> ts = load_traceset("traces.csv", GridSpec())
    """
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"trace file not found: {path}", field="traces")

    try:
        frame = pd.read_csv(
            path,
            header=None,
            dtype=str,
            skip_blank_lines=False,
            keep_default_na=False,
        )
    except pd.errors.EmptyDataError:
        logger.warning("trace_file_empty", path=str(path))
        return TraceSet.empty(grid, day_count=day_count)
    except pd.errors.ParserError as e:
        raise TraceFormatError(f"{path}: {e}") from e

    if frame.shape[1] != len(COLUMNS):
        raise TraceFormatError(
            f"expected {len(COLUMNS)} fields (uid,d,t,x,y), found {frame.shape[1]}", line=1
        )

    frame.columns = list(COLUMNS)
    frame = frame.fillna("")
    valid = np.ones(len(frame), dtype=bool)
    for column in COLUMNS:
        valid &= frame[column].str.fullmatch(_INTEGER_PATTERN).fillna(False).to_numpy()
    if not valid.all():
        row = int(np.flatnonzero(~valid)[0])
        raise TraceFormatError(
            f"expected five integers, got {','.join(frame.iloc[row].tolist())!r}", line=row + 1
        )

    values = frame.apply(lambda column: column.str.strip().astype(np.int64))
    traces = TraceSet(
        grid,
        values["uid"].to_numpy(),
        values["day"].to_numpy(),
        values["bin"].to_numpy(),
        values["x"].to_numpy(),
        values["y"].to_numpy(),
        day_count=day_count,
    )

    logger.info(
        "traceset_loaded",
        path=str(path),
        users=traces.n_users,
        samples=traces.n_samples,
        grid=grid.label(),
    )
    return traces


def write_traceset(ts: TraceSet, path: Path | str) -> Path:
    """
    Write ts as canonical headerless CSV, LF-terminated, sorted by (uid, day, bin).

    Loading and re-writing a canonically sorted file reproduces it byte for byte.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ts.to_frame().to_csv(path, header=False, index=False, lineterminator="\n")
    logger.debug("traceset_written", path=str(path), samples=ts.n_samples)
    return path


def unique_visitors(ts: TraceSet, cell: Cell) -> int:
    """
    Number of distinct users that ever visited cell, s(cell).

    Raises:
        CellOutOfGridError: If cell lies outside the grid
    """
    x, y = ts.grid.require(cell)
    return int(ts.visitor_counts[y * ts.grid.width + x])


def summarize(ts: TraceSet) -> dict:
    """Headline counts used by the ``validate`` subcommand."""
    counts = ts.samples_per_user
    quantiles: Tuple[float, ...] = (
        tuple(float(q) for q in np.quantile(counts, [0.0, 0.5, 1.0])) if counts.size else ()
    )
    return {
        "grid": ts.grid.label(),
        "day_count": ts.day_count,
        "users": ts.n_users,
        "samples": ts.n_samples,
        "days_observed": int(np.unique(ts.days).size),
        "visited_cells": int(np.count_nonzero(ts.visit_counts)),
        "samples_per_user_min_median_max": list(quantiles),
    }
