"""Unit tests for population rasters, holiday calendars and POI catalogs."""

from datetime import date

import numpy as np
import pytest

from src.exceptions import CatalogFormatError, CellOutOfGridError, ValidationError
from src.traces.catalogs import (
    DEFAULT_SENSITIVE_KEYWORDS,
    HolidayCalendar,
    PopulationRaster,
    load_holidays,
    load_pois,
    load_raster,
    write_raster,
)
from src.traces.grid import GridSpec


class TestPopulationRaster:
    """Test suite for raster I/O."""

    def test_write_then_load(self, tmp_path):
        """Test a raster survives CSV plus sidecar round trip."""
        density = np.zeros((3, 2))
        density[0, 1] = 5.5
        density[2, 0] = 1.0
        raster = PopulationRaster("tokyo", density, center_lat=35.68, center_lon=139.76)

        path = write_raster(raster, tmp_path / "tokyo.csv")
        loaded = load_raster(path)

        assert (tmp_path / "tokyo.json").is_file()
        assert loaded.name == "tokyo"
        assert loaded.shape == (3, 2)
        np.testing.assert_allclose(loaded.density, density)
        assert loaded.center_lat == pytest.approx(35.68)

    def test_negative_density_rejected(self):
        """Test densities must be non-negative."""
        with pytest.raises(ValidationError):
            PopulationRaster("bad", np.array([[1.0, -1.0]]), 0.0, 0.0)

    def test_missing_sidecar(self, tmp_path):
        """Test a CSV without sidecar raises ValidationError."""
        path = tmp_path / "city.csv"
        path.write_text("0,0,1\n")

        with pytest.raises(ValidationError):
            load_raster(path)

    def test_malformed_row(self, tmp_path):
        """Test a bad density names its line."""
        path = tmp_path / "city.csv"
        path.write_text("0,0,1\n1,0,abc\n")
        (tmp_path / "city.json").write_text(
            '{"name": "city", "center_lat": 35.0, "center_lon": 137.0}'
        )

        with pytest.raises(CatalogFormatError) as exc_info:
            load_raster(path)
        assert exc_info.value.line == 2


class TestHolidayCalendar:
    """Test suite for holiday calendars."""

    def test_bundled_calendar(self):
        """Test the bundled Japanese calendar covers 2015-2024."""
        calendar = load_holidays()

        assert calendar.coverage_start == date(2015, 1, 1)
        assert calendar.coverage_end == date(2024, 12, 31)
        assert calendar.is_holiday(date(2019, 10, 22))
        assert calendar.name(date(2019, 11, 4)) == "Culture Day Observed"
        assert not calendar.is_holiday(date(2019, 10, 21))

    def test_weekday_holidays_exclude_weekends(self):
        """Test weekday_holidays drops Saturday and Sunday holidays."""
        calendar = load_holidays()
        weekday = calendar.weekday_holidays()

        assert date(2019, 11, 4) in weekday
        assert date(2019, 11, 3) not in weekday
        assert all(d.weekday() < 5 for d in weekday)

    def test_custom_calendar(self, tmp_path):
        """Test loading a user calendar."""
        path = tmp_path / "holidays.csv"
        path.write_text("2020-01-01,New Year\n2020-05-04,Greenery Day\n")

        calendar = load_holidays(path, country="XX")

        assert calendar.country == "XX"
        assert calendar.covers(date(2020, 1, 1), date(2020, 12, 31))
        assert not calendar.covers(date(2019, 12, 31), date(2020, 1, 5))

    def test_duplicate_date_rejected(self, tmp_path):
        """Test duplicate dates name the second line."""
        path = tmp_path / "holidays.csv"
        path.write_text("2020-01-01,New Year\n2020-01-01,Again\n")

        with pytest.raises(CatalogFormatError) as exc_info:
            load_holidays(path)
        assert exc_info.value.line == 2

    def test_empty_calendar_needs_coverage(self, tmp_path):
        """Test an empty file is valid only with explicit coverage."""
        path = tmp_path / "holidays.csv"
        path.write_text("")

        with pytest.raises(CatalogFormatError):
            load_holidays(path)
        calendar = load_holidays(path, coverage=(date(2020, 1, 1), date(2020, 12, 31)))
        assert calendar.holidays == {}

    def test_holiday_outside_coverage_rejected(self):
        """Test the model rejects holidays outside its coverage."""
        with pytest.raises(ValueError):
            HolidayCalendar(
                country="JP",
                holidays={date(2021, 1, 1): "New Year"},
                coverage_start=date(2020, 1, 1),
                coverage_end=date(2020, 12, 31),
            )


class TestPoiCatalog:
    """Test suite for POI catalogs."""

    def test_sensitive_cells_by_keyword(self, tmp_path):
        """Test keyword matching is a case-insensitive substring match."""
        path = tmp_path / "pois.csv"
        path.write_text("1,1,General HOSPITAL\n2,2,Coffee Shop\n3,0,Shinto shrine\n1,1,Bakery\n")

        catalog = load_pois(path, GridSpec(width=4, height=4))

        assert len(catalog.entries) == 4
        assert catalog.sensitive_cells() == frozenset({(1, 1), (3, 0)})
        assert catalog.keywords == DEFAULT_SENSITIVE_KEYWORDS

    def test_custom_keywords(self, tmp_path):
        """Test custom keywords replace the defaults."""
        path = tmp_path / "pois.csv"
        path.write_text("1,1,Hospital\n2,2,Coffee Shop\n")

        catalog = load_pois(path, keywords=["coffee"])

        assert catalog.sensitive_cells() == frozenset({(2, 2)})

    def test_poi_outside_grid(self, tmp_path):
        """Test POIs must lie in the grid."""
        path = tmp_path / "pois.csv"
        path.write_text("9,9,Hospital\n")

        with pytest.raises(CellOutOfGridError):
            load_pois(path, GridSpec(width=4, height=4))

    def test_empty_file(self, tmp_path):
        """Test an empty POI file gives an empty catalog."""
        path = tmp_path / "pois.csv"
        path.write_text("")

        assert load_pois(path).sensitive_cells() == frozenset()
