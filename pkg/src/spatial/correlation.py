"""
Rank correlation between density fields and population rasters.

Scores are Spearman correlations: values are replaced by average ranks
(ties share the mean rank) and the Pearson coefficient of the ranks is
returned. A constant vector has no ranks to correlate, so it raises
CorrelationUndefinedError instead of returning 0.
"""

from typing import Tuple, Union

import numpy as np
from scipy.stats import rankdata

from src.exceptions import CorrelationUndefinedError, ValidationError
from src.spatial.density import DensityField
from src.traces.catalogs import PopulationRaster

FieldLike = Union[DensityField, PopulationRaster, np.ndarray]


def _as_array(value: FieldLike) -> np.ndarray:
    if isinstance(value, DensityField):
        return value.values
    if isinstance(value, PopulationRaster):
        return value.density
    return np.asarray(value, dtype=np.float64)


def spearman(a: np.ndarray, b: np.ndarray) -> float:
    """
    Spearman rank correlation of two equal-length vectors.

    Raises:
        ValidationError: On length mismatch or non-finite values
        CorrelationUndefinedError: With fewer than 2 points or a constant input

    Example:
        >>> spearman(np.array([1, 2, 3]), np.array([3, 2, 1]))
        -1.0
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValidationError(f"length mismatch {a.size} vs {b.size}", field="spearman")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValidationError("inputs must be finite", field="spearman")
    if a.size < 2:
        raise CorrelationUndefinedError(f"spearman needs >= 2 points, got {a.size}")
    if np.all(a == a[0]) or np.all(b == b[0]):
        raise CorrelationUndefinedError("spearman undefined for a constant vector")

    ra = rankdata(a, method="average")
    rb = rankdata(b, method="average")
    ra -= ra.mean()
    rb -= rb.mean()
    r = float(np.dot(ra, rb) / np.sqrt(np.dot(ra, ra) * np.dot(rb, rb)))
    return min(1.0, max(-1.0, r))


def block_sums(values: np.ndarray, cluster: Tuple[int, int]) -> np.ndarray:
    """
    Sum non-overlapping cw x ch blocks of a [x, y] array.

    Raises:
        ValidationError: If the block size does not divide the array shape
    """
    cw, ch = int(cluster[0]), int(cluster[1])
    width, height = values.shape
    if cw < 1 or ch < 1 or width % cw or height % ch:
        raise ValidationError(
            f"cluster {cw}x{ch} does not divide field {width}x{height}", field="cluster"
        )
    return values.reshape(width // cw, cw, height // ch, ch).sum(axis=(1, 3))


def _check_shapes(field: np.ndarray, raster: np.ndarray) -> None:
    if field.shape != raster.shape:
        raise ValidationError(
            f"raster shape {raster.shape} differs from field shape {field.shape}; "
            "resample the raster to the working grid first",
            field="raster",
        )


def clustered_correlation(
    field: FieldLike, raster: FieldLike, cluster: Tuple[int, int] = (40, 40)
) -> float:
    """
    Spearman correlation of block-summed field and raster.

    Args:
        field: Density field (or [x, y] array)
        raster: Population raster already resampled to the field's grid
        cluster: Block size (cw, ch); must divide the field dimensions

    Raises:
        ValidationError: On shape mismatch or non-divisible cluster
        CorrelationUndefinedError: If either block vector is constant
    """
    f = _as_array(field)
    r = _as_array(raster)
    _check_shapes(f, r)
    return spearman(block_sums(f, cluster), block_sums(r, cluster))


def cell_correlation(field: FieldLike, raster: FieldLike) -> float:
    """Grid-level Spearman correlation over all cells, without clustering."""
    f = _as_array(field)
    r = _as_array(raster)
    _check_shapes(f, r)
    return spearman(f, r)
