"""
The eight symmetries of the square, acting on grid coordinates.

Each element is a signed permutation matrix M acting on (x, y). After the
linear map, coordinates are shifted back into the non-negative range, so
a transform maps a W x H grid onto a W x H grid (or H x W when the axes
are swapped). The same coordinate map is used for density fields and for
the cells of a TraceSet.
"""

from enum import Enum
from typing import Dict, Tuple

import numpy as np

from src.exceptions import TransformError

Matrix = Tuple[Tuple[int, int], Tuple[int, int]]


class DihedralTransform(Enum):
    """Dihedral group D4, in canonical search order (index 0..7)."""

    IDENTITY = "identity"
    FLIP_X = "flip-x"
    FLIP_Y = "flip-y"
    FLIP_BOTH = "flip-both"
    ROT_90 = "rot+90"
    ROT_NEG_90 = "rot-90"
    ROT_90_FLIP_X = "rot+90*flip-x"
    ROT_90_FLIP_Y = "rot+90*flip-y"

    @property
    def index(self) -> int:
        return _ORDER.index(self)

    @property
    def matrix(self) -> Matrix:
        return _MATRICES[self]

    @property
    def swaps_axes(self) -> bool:
        return self.matrix[0][0] == 0

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "DihedralTransform":
        key = (
            (int(matrix[0][0]), int(matrix[0][1])),
            (int(matrix[1][0]), int(matrix[1][1])),
        )
        try:
            return _BY_MATRIX[key]
        except KeyError as e:
            raise TransformError(f"{key} is not a symmetry of the square") from e

    @classmethod
    def parse(cls, text: str) -> "DihedralTransform":
        normalized = text.strip().lower().replace("_", "-").replace("∘", "*")
        for member in cls:
            if normalized in (member.value, member.name.lower().replace("_", "-")):
                return member
        raise TransformError(f"unknown transform {text!r}")


# (x, y) -> (a x + b y, c x + d y)
_MATRICES: Dict[DihedralTransform, Matrix] = {
    DihedralTransform.IDENTITY: ((1, 0), (0, 1)),
    DihedralTransform.FLIP_X: ((1, 0), (0, -1)),
    DihedralTransform.FLIP_Y: ((-1, 0), (0, 1)),
    DihedralTransform.FLIP_BOTH: ((-1, 0), (0, -1)),
    DihedralTransform.ROT_90: ((0, 1), (-1, 0)),
    DihedralTransform.ROT_NEG_90: ((0, -1), (1, 0)),
    DihedralTransform.ROT_90_FLIP_X: ((0, -1), (-1, 0)),
    DihedralTransform.ROT_90_FLIP_Y: ((0, 1), (1, 0)),
}
_ORDER = tuple(DihedralTransform)
_BY_MATRIX = {matrix: member for member, matrix in _MATRICES.items()}


def compose(outer: DihedralTransform, inner: DihedralTransform) -> DihedralTransform:
    """Transform equal to applying ``inner`` first, then ``outer``."""
    product = np.asarray(outer.matrix) @ np.asarray(inner.matrix)
    return DihedralTransform.from_matrix(product)


def inverse(transform: DihedralTransform) -> DihedralTransform:
    """Inverse element; the transpose of an orthogonal matrix."""
    return DihedralTransform.from_matrix(np.asarray(transform.matrix).T)


def output_shape(transform: DihedralTransform, width: int, height: int) -> Tuple[int, int]:
    return (height, width) if transform.swaps_axes else (width, height)


def transform_cells(
    xs: np.ndarray,
    ys: np.ndarray,
    transform: DihedralTransform,
    width: int,
    height: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Map cell coordinates through transform, re-indexed to start at 0.

    Raises:
        TransformError: If the transform swaps axes on a non-square grid
    """
    if transform.swaps_axes and width != height:
        raise TransformError(
            f"{transform.value} needs a square grid, got {width}x{height}", field="transform"
        )
    (a, b), (c, d) = transform.matrix
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    nx = a * xs + b * ys + (width - 1 if a < 0 else 0) + (height - 1 if b < 0 else 0)
    ny = c * xs + d * ys + (width - 1 if c < 0 else 0) + (height - 1 if d < 0 else 0)
    return nx, ny


def transform_array(values: np.ndarray, transform: DihedralTransform) -> np.ndarray:
    """Relocate every entry of a [x, y] array according to transform."""
    width, height = values.shape
    xs, ys = np.indices((width, height))
    nx, ny = transform_cells(xs.ravel(), ys.ravel(), transform, width, height)
    out = np.zeros(output_shape(transform, width, height), dtype=values.dtype)
    out[nx, ny] = values.ravel()
    return out
