"""
Raster geometry: resampling population rasters onto the working grid.

Both the raster and the working grid are centered: the center of cell
(N // 2) along an axis of N cells sits at the geographic center, x grows
eastward and y northward. Degrees convert to meters with a local
equirectangular approximation at the raster's center latitude.
"""

import math
from typing import Optional, Tuple

import numpy as np

from src.exceptions import AlignmentError, ValidationError
from src.models.reports import GeoAlignment
from src.traces.catalogs import PopulationRaster
from src.traces.grid import Cell, GridSpec
from src.utils.logger import get_logger

logger = get_logger(__name__)

METERS_PER_DEGREE = 111_320.0

# Extent comparisons tolerate rounding in degree/meter conversions.
_EDGE_TOLERANCE_M = 1e-6


def _cell_edges(n: int, cell_size: float, shift_m: float = 0.0) -> np.ndarray:
    return (np.arange(n + 1, dtype=np.float64) - n // 2 - 0.5) * cell_size + shift_m


def _overlap_matrix(target_edges: np.ndarray, source_edges: np.ndarray) -> np.ndarray:
    """Share of each source cell's length falling in each target cell, (Nt, Ns)."""
    lo = np.maximum(target_edges[:-1, None], source_edges[None, :-1])
    hi = np.minimum(target_edges[1:, None], source_edges[None, 1:])
    source_size = np.diff(source_edges)[None, :]
    return np.clip(hi - lo, 0.0, None) / source_size


def meters_offset(
    origin_lat: float, origin_lon: float, lat: float, lon: float
) -> Tuple[float, float]:
    """East and north offset in meters of (lat, lon) from the origin."""
    dx = (lon - origin_lon) * METERS_PER_DEGREE * math.cos(math.radians(origin_lat))
    dy = (lat - origin_lat) * METERS_PER_DEGREE
    return dx, dy


def _resample(
    raster: PopulationRaster, grid: GridSpec, lat: float, lon: float, strict: bool
) -> np.ndarray:
    width, height = raster.shape
    dx, dy = meters_offset(raster.center_lat, raster.center_lon, lat, lon)

    src_x = _cell_edges(width, raster.cell_size_m)
    src_y = _cell_edges(height, raster.cell_size_m)
    dst_x = _cell_edges(grid.width, grid.cell_size_m, dx)
    dst_y = _cell_edges(grid.height, grid.cell_size_m, dy)

    if strict:
        covered = (
            dst_x[0] >= src_x[0] - _EDGE_TOLERANCE_M
            and dst_x[-1] <= src_x[-1] + _EDGE_TOLERANCE_M
            and dst_y[0] >= src_y[0] - _EDGE_TOLERANCE_M
            and dst_y[-1] <= src_y[-1] + _EDGE_TOLERANCE_M
        )
        if not covered:
            raise AlignmentError(
                f"raster {raster.name!r} does not cover a {grid.label()} window "
                f"centered at ({lat:.6f}, {lon:.6f})"
            )

    wx = _overlap_matrix(dst_x, src_x)
    wy = _overlap_matrix(dst_y, src_y)
    return wx @ raster.density @ wy.T


def resample_raster(
    raster: PopulationRaster,
    grid: GridSpec,
    center: Optional[Tuple[float, float]] = None,
) -> PopulationRaster:
    """
    Area-weighted aggregation of raster onto grid.

    Each source cell's population is split across the target cells it
    overlaps, in proportion to the overlapping area. Target cells outside
    the raster get 0. With identical geometry the raster is returned
    unchanged.

    Args:
        raster: Source raster
        grid: Working grid (dimensions and cell size)
        center: Target center (lat, lon); defaults to the raster center

    Returns:
        PopulationRaster with the grid's shape and cell size
    """
    lat, lon = center if center is not None else (raster.center_lat, raster.center_lon)
    same_geometry = (
        center is None
        and raster.shape == (grid.width, grid.height)
        and raster.cell_size_m == grid.cell_size_m
    )
    density = raster.density if same_geometry else _resample(raster, grid, lat, lon, False)
    return PopulationRaster(
        name=raster.name,
        density=np.array(density, dtype=np.float64),
        center_lat=lat,
        center_lon=lon,
        cell_size_m=grid.cell_size_m,
    )


class GeoRasterSampler:
    """
    Rasterizes a geo-referenced population source at any candidate center.

    Args:
        raster: Source raster; must extend past every window it is asked for
        strict: Raise AlignmentError when a window leaves the raster

    Example:
        >>> sampler = GeoRasterSampler(region)
        >>> values = sampler.rasterize(35.05, 136.96, GridSpec(width=200, height=200))
    """

    def __init__(self, raster: PopulationRaster, strict: bool = True) -> None:
        self.raster = raster
        self.strict = strict
        self.calls = 0

    def rasterize(self, lat: float, lon: float, grid: GridSpec) -> np.ndarray:
        self.calls += 1
        return _resample(self.raster, grid, lat, lon, self.strict)


def cells_to_geo(alignment: GeoAlignment, grid: GridSpec, cell: Cell) -> Tuple[float, float]:
    """
    Latitude and longitude of a cell center under an aligned frame.

    Raises:
        CellOutOfGridError: If cell lies outside grid
    """
    x, y = grid.require(cell)
    lat0, lon0 = alignment.center_lat, alignment.center_lon
    lat = lat0 + (y - grid.height // 2) * grid.cell_size_m / METERS_PER_DEGREE
    lon = lon0 + (x - grid.width // 2) * grid.cell_size_m / (
        METERS_PER_DEGREE * math.cos(math.radians(lat0))
    )
    return lat, lon


def geo_to_cell(alignment: GeoAlignment, grid: GridSpec, lat: float, lon: float) -> Cell:
    """
    Nearest grid cell to (lat, lon) under an aligned frame.

    Raises:
        CellOutOfGridError: If the point falls outside grid
    """
    if not (-90 <= lat <= 90 and -180 <= lon <= 180):
        raise ValidationError(f"invalid coordinate ({lat}, {lon})", field="coordinate")
    dx, dy = meters_offset(alignment.center_lat, alignment.center_lon, lat, lon)
    x = int(round(dx / grid.cell_size_m)) + grid.width // 2
    y = int(round(dy / grid.cell_size_m)) + grid.height // 2
    return grid.require((x, y))
