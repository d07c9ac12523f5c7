"""
Auxiliary catalogs: population rasters, holiday calendars and POI labels.

The toolkit ships a bundled Japanese national-holiday calendar for
2015-2024 and a default list of sensitivity keywords. Both are used when
the caller does not supply its own files.
"""

import json
from dataclasses import dataclass, field
from datetime import date, timedelta
from importlib import resources
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, model_validator

from src.exceptions import CatalogFormatError, ValidationError
from src.traces.grid import Cell, GridSpec
from src.utils.logger import get_logger

logger = get_logger(__name__)

BUNDLED_CALENDAR = "jp_holidays_2015_2024.csv"

# Category substrings flagging a POI as sensitive (health, religion,
# nightlife, recovery, politics, adult venues). Matching is case-insensitive.
DEFAULT_SENSITIVE_KEYWORDS: Tuple[str, ...] = (
    "Hospital",
    "Clinic",
    "Medical",
    "Pharmacy",
    "Relig",
    "Church",
    "Mosque",
    "Temple",
    "Shrine",
    "Nightclub",
    "Addiction",
    "Rehab",
    "Counsel",
    "Therapy",
    "Politic",
    "Party",
    "Campaign",
    "Adult",
    "Strip",
)


# ----------------------------------------------------------------------
# population rasters


class RasterMetadata(BaseModel):
    """Sidecar metadata for a population raster CSV."""

    name: str = Field(..., min_length=1, description="City label")
    center_lat: float = Field(..., ge=-90, le=90, description="Latitude of the raster center")
    center_lon: float = Field(..., ge=-180, le=180, description="Longitude of the raster center")
    cell_size_m: float = Field(500.0, gt=0, description="Meters per raster cell side")
    width: Optional[int] = Field(None, ge=1, description="Cells along x (default: max x + 1)")
    height: Optional[int] = Field(None, ge=1, description="Cells along y (default: max y + 1)")


@dataclass(frozen=True)
class PopulationRaster:
    """
    Per-cell population density of one city, indexed [x, y].

    The raster center is the center of cell (width // 2, height // 2).
    """

    name: str
    density: np.ndarray
    center_lat: float
    center_lon: float
    cell_size_m: float = 500.0

    def __post_init__(self) -> None:
        values = np.asarray(self.density, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationError("density must be a 2-D array", field="raster")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValidationError("densities must be finite and >= 0", field=self.name)
        values.flags.writeable = False
        object.__setattr__(self, "density", values)

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.density.shape[0]), int(self.density.shape[1])

    def metadata(self) -> RasterMetadata:
        width, height = self.shape
        return RasterMetadata(
            name=self.name,
            center_lat=self.center_lat,
            center_lon=self.center_lon,
            cell_size_m=self.cell_size_m,
            width=width,
            height=height,
        )


def raster_metadata_path(path: Path) -> Path:
    return path.with_suffix(".json")


def load_raster(path: Path | str, meta_path: Path | str | None = None) -> PopulationRaster:
    """
    Load a ``x,y,density`` CSV plus its JSON sidecar.

    Cells absent from the CSV have density 0.

    Args:
        path: Headerless raster CSV
        meta_path: Sidecar JSON (default: same stem with ``.json``)

    Raises:
        ValidationError: If either file is missing
        CatalogFormatError: On malformed rows (line number reported)
    """
    path = Path(path)
    meta = Path(meta_path) if meta_path else raster_metadata_path(path)
    for required in (path, meta):
        if not required.is_file():
            raise ValidationError(f"raster file not found: {required}", field="rasters")

    try:
        metadata = RasterMetadata.model_validate(json.loads(meta.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, ValueError) as e:
        raise CatalogFormatError(f"{meta}: {e}") from e

    try:
        frame = pd.read_csv(path, header=None, names=["x", "y", "density"], dtype=str)
    except pd.errors.EmptyDataError:
        frame = pd.DataFrame(columns=["x", "y", "density"], dtype=str)
    except pd.errors.ParserError as e:
        raise CatalogFormatError(f"{path}: {e}") from e

    xs = pd.to_numeric(frame["x"], errors="coerce")
    ys = pd.to_numeric(frame["y"], errors="coerce")
    values = pd.to_numeric(frame["density"], errors="coerce")
    bad = (
        xs.isna() | ys.isna() | values.isna()
        | (xs % 1 != 0) | (ys % 1 != 0) | (xs < 0) | (ys < 0) | (values < 0)
    )
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise CatalogFormatError(f"invalid raster row in {path}", line=row + 1)

    ix = xs.to_numpy(dtype=np.int64)
    iy = ys.to_numpy(dtype=np.int64)
    width = metadata.width or (int(ix.max()) + 1 if ix.size else 1)
    height = metadata.height or (int(iy.max()) + 1 if iy.size else 1)
    if ix.size and (ix.max() >= width or iy.max() >= height):
        raise CatalogFormatError(f"raster cell outside declared {width}x{height} in {path}")

    density = np.zeros((width, height), dtype=np.float64)
    np.add.at(density, (ix, iy), values.to_numpy(dtype=np.float64))

    logger.info("raster_loaded", path=str(path), name=metadata.name, width=width, height=height)
    return PopulationRaster(
        name=metadata.name,
        density=density,
        center_lat=metadata.center_lat,
        center_lon=metadata.center_lon,
        cell_size_m=metadata.cell_size_m,
    )


def write_raster(raster: PopulationRaster, path: Path | str) -> Path:
    """Write raster as ``x,y,density`` CSV (non-zero cells) plus JSON sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    xs, ys = np.nonzero(raster.density)
    frame = pd.DataFrame({"x": xs, "y": ys, "density": raster.density[xs, ys]})
    frame.to_csv(path, header=False, index=False, lineterminator="\n", float_format="%.10g")
    raster_metadata_path(path).write_text(
        raster.metadata().model_dump_json(indent=2) + "\n", encoding="utf-8"
    )
    return path


# ----------------------------------------------------------------------
# holiday calendars


class HolidayCalendar(BaseModel):
    """
    Named public holidays of one country, with the date range they cover.

    A calendar with no holidays inside its coverage is valid; a search
    window outside the coverage is not.
    """

    country: str = Field(..., min_length=1)
    holidays: Dict[date, str] = Field(default_factory=dict)
    coverage_start: date
    coverage_end: date

    @model_validator(mode="after")
    def check_coverage(self) -> "HolidayCalendar":
        if self.coverage_end < self.coverage_start:
            raise ValueError("coverage_end precedes coverage_start")
        outside = [d for d in self.holidays if not self.coverage_start <= d <= self.coverage_end]
        if outside:
            raise ValueError(f"holiday {min(outside)} outside coverage")
        return self

    def is_holiday(self, day: date) -> bool:
        return day in self.holidays

    def name(self, day: date) -> Optional[str]:
        return self.holidays.get(day)

    def covers(self, start: date, end: date) -> bool:
        return self.coverage_start <= start and end <= self.coverage_end

    def weekday_holidays(self) -> List[date]:
        """Sorted holidays falling Monday-Friday."""
        return sorted(d for d in self.holidays if d.weekday() < 5)


def load_holidays(
    path: Path | str | None = None,
    country: str = "JP",
    coverage: Optional[Tuple[date, date]] = None,
) -> HolidayCalendar:
    """
    Load a ``YYYY-MM-DD,name`` holiday CSV.

    Args:
        path: Holiday CSV, or None for the bundled Japanese 2015-2024 calendar
        country: Country label stored on the calendar
        coverage: Explicit covered range; default is Jan 1 of the first
            listed year through Dec 31 of the last

    Raises:
        CatalogFormatError: On malformed or duplicate rows (line number reported)

    Example:
        >>> cal = load_holidays()
        >>> cal.name(date(2019, 10, 22))
        'Enthronement Ceremony Day'
    """
    if path is None:
        source = resources.files("src.traces.data").joinpath(BUNDLED_CALENDAR)
        with resources.as_file(source) as bundled:
            return load_holidays(bundled, country=country, coverage=coverage)

    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"holiday file not found: {path}", field="calendar")

    try:
        frame = pd.read_csv(
            path, header=None, names=["date", "name"], dtype=str, keep_default_na=False
        )
    except pd.errors.EmptyDataError:
        frame = pd.DataFrame(columns=["date", "name"], dtype=str)
    except pd.errors.ParserError as e:
        raise CatalogFormatError(f"{path}: {e}") from e

    parsed = pd.to_datetime(frame["date"], format="%Y-%m-%d", errors="coerce")
    names = frame["name"].fillna("").str.strip()
    bad = parsed.isna() | (names == "")
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise CatalogFormatError(f"invalid holiday row in {path}", line=row + 1)

    holidays: Dict[date, str] = {}
    for row, (stamp, name) in enumerate(zip(parsed, names)):
        day = stamp.date()
        if day in holidays:
            raise CatalogFormatError(f"duplicate holiday date {day}", line=row + 1)
        holidays[day] = name

    if coverage is None:
        if not holidays:
            raise CatalogFormatError(f"empty holiday calendar {path}; pass an explicit coverage")
        first, last = min(holidays), max(holidays)
        coverage = (date(first.year, 1, 1), date(last.year, 12, 31))

    calendar = HolidayCalendar(
        country=country, holidays=holidays, coverage_start=coverage[0], coverage_end=coverage[1]
    )
    logger.info(
        "holiday_calendar_loaded",
        path=str(path),
        holidays=len(holidays),
        coverage_start=str(calendar.coverage_start),
        coverage_end=str(calendar.coverage_end),
    )
    return calendar


def date_range(start: date, end: date) -> List[date]:
    """Inclusive list of dates from start to end."""
    return [start + timedelta(days=i) for i in range((end - start).days + 1)]


# ----------------------------------------------------------------------
# points of interest


@dataclass(frozen=True)
class PoiEntry:
    cell: Cell
    category: str


@dataclass(frozen=True)
class PoiCatalog:
    """
    POIs labelled with free-text categories, plus the sensitivity keywords.

    A cell is sensitive when any of its POI categories contains a keyword
    (case-insensitive substring match).
    """

    entries: Tuple[PoiEntry, ...] = ()
    keywords: Tuple[str, ...] = DEFAULT_SENSITIVE_KEYWORDS
    _lowered: Tuple[str, ...] = field(default=(), init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_lowered", tuple(k.lower() for k in self.keywords if k))

    def is_sensitive_category(self, category: str) -> bool:
        text = category.lower()
        return any(keyword in text for keyword in self._lowered)

    def sensitive_cells(self) -> FrozenSet[Cell]:
        return frozenset(e.cell for e in self.entries if self.is_sensitive_category(e.category))


def load_pois(
    path: Path | str,
    grid: Optional[GridSpec] = None,
    keywords: Optional[Sequence[str]] = None,
) -> PoiCatalog:
    """
    Load a headerless ``x,y,category`` POI CSV.

    Args:
        path: POI CSV (may be empty)
        grid: If given, every POI cell must lie inside it
        keywords: Sensitivity keywords (default: DEFAULT_SENSITIVE_KEYWORDS)

    Raises:
        CatalogFormatError: On malformed rows (line number reported)
        CellOutOfGridError: If a POI lies outside grid
    """
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"POI file not found: {path}", field="pois")

    try:
        frame = pd.read_csv(
            path, header=None, names=["x", "y", "category"], dtype=str, keep_default_na=False
        )
    except pd.errors.EmptyDataError:
        frame = pd.DataFrame(columns=["x", "y", "category"], dtype=str)
    except pd.errors.ParserError as e:
        raise CatalogFormatError(f"{path}: {e}") from e

    entries: List[PoiEntry] = []
    seen: Set[Tuple[Cell, str]] = set()
    for row, (x, y, category) in enumerate(frame.itertuples(index=False, name=None)):
        try:
            cell = (int(str(x).strip()), int(str(y).strip()))
        except ValueError as e:
            raise CatalogFormatError(f"invalid POI cell {x!r},{y!r}", line=row + 1) from e
        if grid is not None:
            grid.require(cell)
        label = str(category).strip()
        if (cell, label) not in seen:
            seen.add((cell, label))
            entries.append(PoiEntry(cell=cell, category=label))

    catalog = PoiCatalog(
        entries=tuple(entries),
        keywords=tuple(keywords) if keywords is not None else DEFAULT_SENSITIVE_KEYWORDS,
    )
    logger.info(
        "poi_catalog_loaded",
        path=str(path),
        entries=len(entries),
        sensitive_cells=len(catalog.sensitive_cells()),
    )
    return catalog
