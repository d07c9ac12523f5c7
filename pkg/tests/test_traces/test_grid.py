"""Unit tests for grid geometry."""

import numpy as np
import pytest

from src.exceptions import CellOutOfGridError, ValidationError
from src.traces.grid import GridSpec


class TestGridSpec:
    """Test suite for GridSpec."""

    def test_defaults(self):
        """Test the default grid is 200x200 with 500 m cells."""
        grid = GridSpec()

        assert (grid.width, grid.height) == (200, 200)
        assert grid.cell_size_m == 500.0
        assert grid.n_cells == 40_000
        assert grid.is_square

    @pytest.mark.parametrize("text,expected", [("200x200", (200, 200)), (" 30 X 20 ", (30, 20))])
    def test_parse(self, text, expected):
        """Test parsing WxH strings."""
        grid = GridSpec.parse(text, cell_size_m=250)

        assert (grid.width, grid.height) == expected
        assert grid.cell_size_m == 250

    @pytest.mark.parametrize("text", ["200", "200x", "ax3", "0x5x5"])
    def test_parse_invalid(self, text):
        """Test malformed grid strings raise ValidationError."""
        with pytest.raises(ValidationError):
            GridSpec.parse(text)

    def test_label(self):
        """Test label renders WxH."""
        assert GridSpec(width=30, height=20).label() == "30x20"

    def test_require_inside_and_outside(self):
        """Test require() returns the cell or raises CellOutOfGridError."""
        grid = GridSpec(width=4, height=3)

        assert grid.require((3, 2)) == (3, 2)
        with pytest.raises(CellOutOfGridError) as exc_info:
            grid.require((4, 0))
        assert exc_info.value.cell == (4, 0)

    def test_flat_index_is_row_major_in_y(self):
        """Test flat index y * W + x and its inverse."""
        grid = GridSpec(width=4, height=3)
        xs = np.array([0, 3, 1])
        ys = np.array([0, 0, 2])

        flat = grid.flat_index(xs, ys)
        assert flat.tolist() == [0, 3, 9]
        back_x, back_y = grid.unflatten(flat)
        assert back_x.tolist() == xs.tolist()
        assert back_y.tolist() == ys.tolist()

    def test_lex_key_orders_by_x_then_y(self):
        """Test the lexicographic key sorts (x, y) pairs."""
        grid = GridSpec(width=4, height=3)
        xs = np.array([1, 0, 1, 0])
        ys = np.array([0, 2, 1, 0])

        order = np.argsort(grid.lex_key(xs, ys))
        assert list(zip(xs[order], ys[order])) == [(0, 0), (0, 2), (1, 0), (1, 1)]
