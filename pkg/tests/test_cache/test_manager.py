"""Unit tests for the file-backed row cache."""

import json

import pytest

from src.cache.manager import RowCache

KEY = "gridtrace:sweep_row:a3f8d9c2e1b4:v1"


class TestRowCache:
    """Test suite for RowCache class."""

    @pytest.fixture
    def cache(self, tmp_path):
        """Create a RowCache in a temporary directory."""
        return RowCache(tmp_path / "cache")

    def test_get_cache_miss(self, cache):
        """Test get() returns None on cache miss."""
        assert cache.get(KEY) is None

    def test_set_then_get(self, cache):
        """Test set() stores a row that get() returns."""
        row = {"epsilon": 2.0, "reid_rate": 0.25, "error": None}

        assert cache.set(KEY, row) is True
        assert cache.get(KEY) == row

    def test_disabled_cache_always_misses(self):
        """Test a cache without directory never stores anything."""
        cache = RowCache(None)

        assert cache.enabled is False
        assert cache.set(KEY, {"a": 1}) is False
        assert cache.get(KEY) is None
        assert cache.delete(KEY) is False

    def test_get_invalid_json_deletes_entry(self, cache):
        """Test get() treats a corrupt entry as a miss and removes it."""
        path = cache._path(KEY)
        path.write_text("invalid json {", encoding="utf-8")

        assert cache.get(KEY) is None
        assert not path.exists()

    def test_get_key_mismatch_is_miss(self, cache):
        """Test an entry stored under another key is rejected."""
        cache._path(KEY).write_text(
            json.dumps({"key": "gridtrace:other:000000000000:v1", "data": {}}), encoding="utf-8"
        )

        assert cache.get(KEY) is None

    def test_set_non_serializable_data(self, cache):
        """Test set() returns False for values JSON cannot encode."""
        assert cache.set(KEY, {"bad": object()}) is False
        assert cache.get(KEY) is None

    def test_delete_success(self, cache):
        """Test delete() removes an existing entry."""
        cache.set(KEY, {"a": 1})

        assert cache.delete(KEY) is True
        assert cache.get(KEY) is None

    def test_delete_nonexistent_key(self, cache):
        """Test delete() returns False when nothing was stored."""
        assert cache.delete(KEY) is False

    def test_get_or_compute_cache_miss(self, cache):
        """Test get_or_compute() computes and stores on a miss."""
        calls = []

        def compute():
            calls.append(1)
            return {"value": 42}

        result = cache.get_or_compute(KEY, compute)

        assert result == {"data": {"value": 42}, "metadata": {"cached": False}}
        assert cache.get(KEY) == {"value": 42}
        assert len(calls) == 1

    def test_get_or_compute_cache_hit(self, cache):
        """Test get_or_compute() reuses a stored row."""
        cache.set(KEY, {"value": 1})

        result = cache.get_or_compute(KEY, lambda: pytest.fail("should not compute"))

        assert result == {"data": {"value": 1}, "metadata": {"cached": True}}

    def test_get_or_compute_error_propagates(self, cache):
        """Test compute errors are re-raised and nothing is cached."""

        def compute():
            raise RuntimeError("row failed")

        with pytest.raises(RuntimeError, match="row failed"):
            cache.get_or_compute(KEY, compute)
        assert cache.get(KEY) is None

    def test_get_or_compute_disabled_still_computes(self):
        """Test a disabled cache still returns computed values."""
        result = RowCache(None).get_or_compute(KEY, lambda: {"value": 7})

        assert result["data"] == {"value": 7}
        assert result["metadata"]["cached"] is False

    def test_get_or_compute_cache_if_rejects(self, cache):
        """Test a value refused by cache_if is returned but not stored."""
        failed = {"value": None, "error": "ValidationError: transient"}

        result = cache.get_or_compute(KEY, lambda: failed, cache_if=lambda r: r["error"] is None)

        assert result == {"data": failed, "metadata": {"cached": False}}
        assert cache.get(KEY) is None

        ok = {"value": 3, "error": None}
        cache.get_or_compute(KEY, lambda: ok, cache_if=lambda r: r["error"] is None)
        assert cache.get(KEY) == ok
