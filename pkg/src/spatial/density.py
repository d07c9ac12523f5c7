"""Per-cell density fields aggregated from a TraceSet."""

from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np

from src.exceptions import ValidationError
from src.spatial.transforms import DihedralTransform, transform_array
from src.traces.store import TraceSet

DensityMode = Literal["visits", "unique_users"]


@dataclass(frozen=True)
class DensityField:
    """
    Non-negative per-cell counts over a W x H grid, indexed [x, y].

    Attributes:
        values: Float array of shape (width, height)
        days: Half-open day range [start, stop) the field was built from,
            or None for the full horizon
        mode: "visits" or "unique_users"
    """

    values: np.ndarray
    days: Optional[Tuple[int, int]] = None
    mode: str = "visits"

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationError("density field must be 2-D", field="field")
        if np.any(values < 0):
            raise ValidationError("density entries must be >= 0", field="field")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.values.shape[0]), int(self.values.shape[1])

    @property
    def total(self) -> float:
        return float(self.values.sum())

    def scaled(self, factor: float) -> "DensityField":
        return DensityField(self.values * factor, self.days, self.mode)


def density_field(
    ts: TraceSet,
    days: Optional[Tuple[int, int]] = None,
    mode: DensityMode = "visits",
) -> DensityField:
    """
    Aggregate ts into a per-cell density field.

    Args:
        ts: Trajectories
        days: Optional half-open day range [start, stop)
        mode: "visits" counts samples; "unique_users" counts distinct users

    Returns:
        DensityField with the shape of ts.grid

    Raises:
        ValidationError: If the day range is empty or outside [0, D)

    Example:
        >>> density_field(ts, days=(0, 7), mode="unique_users")
    """
    if mode not in ("visits", "unique_users"):
        raise ValidationError(f"unknown mode {mode!r}", field="mode")

    grid = ts.grid
    if days is not None:
        start, stop = int(days[0]), int(days[1])
        if not 0 <= start < stop <= ts.day_count:
            raise ValidationError(
                f"empty or out-of-range day range [{start}, {stop}) for D={ts.day_count}",
                field="days",
            )
        mask = (ts.days >= start) & (ts.days < stop)
        cells = ts.cell_indices[mask]
        users = ts.user_positions[mask]
        days = (start, stop)
    else:
        cells = ts.cell_indices
        users = ts.user_positions

    if mode == "unique_users":
        pairs = np.unique(users * grid.n_cells + cells)
        cells = pairs % grid.n_cells

    counts = np.bincount(cells, minlength=grid.n_cells).astype(np.float64)
    # flat index is y * W + x, so the row-major (H, W) view transposes to [x, y]
    values = counts.reshape(grid.height, grid.width).T
    return DensityField(values, days=days, mode=mode)


def apply_transform(field: DensityField, transform: DihedralTransform) -> DensityField:
    """
    Relocate field contents through transform; total mass is preserved.

    Raises:
        TransformError: If transform swaps axes on a non-square field
    """
    return DensityField(transform_array(field.values, transform), field.days, field.mode)
