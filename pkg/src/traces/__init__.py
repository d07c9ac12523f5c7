"""Trajectory store and auxiliary catalogs.

This package provides:
- Grid geometry (GridSpec)
- The validated, indexed trajectory corpus (TraceSet)
- Population rasters, holiday calendars and POI catalogs
"""

from src.traces.catalogs import (
    DEFAULT_SENSITIVE_KEYWORDS,
    HolidayCalendar,
    PoiCatalog,
    PoiEntry,
    PopulationRaster,
    RasterMetadata,
    load_holidays,
    load_pois,
    load_raster,
    write_raster,
)
from src.traces.grid import Cell, GridSpec
from src.traces.store import (
    BINS_PER_DAY,
    DEFAULT_DAY_COUNT,
    Sample,
    TraceSet,
    Trajectory,
    load_traceset,
    summarize,
    unique_visitors,
    write_traceset,
)

__all__ = [
    # Grid
    "Cell",
    "GridSpec",
    # Trace store
    "BINS_PER_DAY",
    "DEFAULT_DAY_COUNT",
    "Sample",
    "TraceSet",
    "Trajectory",
    "load_traceset",
    "write_traceset",
    "unique_visitors",
    "summarize",
    # Catalogs
    "DEFAULT_SENSITIVE_KEYWORDS",
    "HolidayCalendar",
    "PoiCatalog",
    "PoiEntry",
    "PopulationRaster",
    "RasterMetadata",
    "load_holidays",
    "load_pois",
    "load_raster",
    "write_raster",
]
