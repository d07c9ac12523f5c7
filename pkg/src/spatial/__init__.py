"""Spatial re-identification.

This package provides:
- Density fields and the eight square symmetries
- Spearman and clustered correlation against population rasters
- City matching over transforms x cities
- Hill-climbing geographic alignment and cell <-> geo conversion
"""

from src.spatial.alignment import DEFAULT_STEP_DEG, hill_climb_align
from src.spatial.correlation import block_sums, cell_correlation, clustered_correlation, spearman
from src.spatial.density import DensityField, apply_transform, density_field
from src.spatial.matching import DEFAULT_CLUSTER, match_city, match_days
from src.spatial.raster import (
    METERS_PER_DEGREE,
    GeoRasterSampler,
    cells_to_geo,
    geo_to_cell,
    resample_raster,
)
from src.spatial.transforms import (
    DihedralTransform,
    compose,
    inverse,
    transform_array,
    transform_cells,
)

__all__ = [
    # Density and transforms
    "DensityField",
    "density_field",
    "apply_transform",
    "DihedralTransform",
    "compose",
    "inverse",
    "transform_array",
    "transform_cells",
    # Correlation
    "spearman",
    "block_sums",
    "cell_correlation",
    "clustered_correlation",
    # Matching
    "DEFAULT_CLUSTER",
    "match_city",
    "match_days",
    # Geography
    "METERS_PER_DEGREE",
    "GeoRasterSampler",
    "resample_raster",
    "cells_to_geo",
    "geo_to_cell",
    "DEFAULT_STEP_DEG",
    "hill_climb_align",
]
