"""
Grid specification for cell-discretized trajectories.

Cells are addressed by integer (x, y) coordinates with x in [0, width) and
y in [0, height). Arrays over the grid are indexed [x, y]; the flat cell
index used by randomized response and the inverted index is row-major,
``y * width + x``.
"""

import re
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.exceptions import CellOutOfGridError, ValidationError

Cell = Tuple[int, int]

_GRID_PATTERN = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


class GridSpec(BaseModel):
    """
    Dimensions and geometry of the working grid.

    The geographic origin is unknown before spatial re-identification and
    is only set on grids produced by an alignment.
    """

    model_config = ConfigDict(frozen=True)

    width: int = Field(200, ge=1, description="Number of cells along x")
    height: int = Field(200, ge=1, description="Number of cells along y")
    cell_size_m: float = Field(500.0, gt=0, description="Meters per cell side")
    origin_lat: Optional[float] = Field(
        None, ge=-90, le=90, description="Latitude of the grid center, once aligned"
    )
    origin_lon: Optional[float] = Field(
        None, ge=-180, le=180, description="Longitude of the grid center, once aligned"
    )

    @classmethod
    def parse(cls, text: str, cell_size_m: float = 500.0) -> "GridSpec":
        """
        Build a GridSpec from a ``WxH`` string.

        Example:
            >>> GridSpec.parse("200x200").n_cells
            40000
        """
        match = _GRID_PATTERN.match(text)
        if not match:
            raise ValidationError(f"expected WxH, got {text!r}", field="grid")
        return cls(width=int(match.group(1)), height=int(match.group(2)), cell_size_m=cell_size_m)

    @property
    def n_cells(self) -> int:
        return self.width * self.height

    @property
    def is_square(self) -> bool:
        return self.width == self.height

    def label(self) -> str:
        return f"{self.width}x{self.height}"

    def contains(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def require(self, cell: Sequence[int]) -> Cell:
        """Return cell as a tuple, raising CellOutOfGridError if it is outside."""
        x, y = int(cell[0]), int(cell[1])
        if not self.contains(x, y):
            raise CellOutOfGridError((x, y), self.width, self.height)
        return x, y

    def flat_index(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return np.asarray(ys, dtype=np.int64) * self.width + np.asarray(xs, dtype=np.int64)

    def unflatten(self, indices: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        indices = np.asarray(indices, dtype=np.int64)
        return indices % self.width, indices // self.width

    def lex_key(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Integer key ordering cells by (x, y) lexicographically."""
        return np.asarray(xs, dtype=np.int64) * self.height + np.asarray(ys, dtype=np.int64)
