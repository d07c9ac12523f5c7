"""Unit tests for cache key generation."""

import pytest

from src.cache.keys import CacheKeyGenerator


class TestCacheKeyGenerator:
    """Test suite for CacheKeyGenerator class."""

    def test_generate_basic_key(self):
        """Test basic cache key generation."""
        params = {"mechanism": "grr", "epsilon": 2.0, "seed": 7}
        key = CacheKeyGenerator.generate("sweep_row", params)

        assert key.startswith("gridtrace:sweep_row:")
        assert key.endswith(":v1")
        assert len(key.split(":")) == 4

    def test_generate_deterministic(self):
        """Test that same params generate same key."""
        key1 = CacheKeyGenerator.generate("sweep_row", {"epsilon": 1.0, "seed": 3})
        key2 = CacheKeyGenerator.generate("sweep_row", {"epsilon": 1.0, "seed": 3})

        assert key1 == key2

    def test_generate_order_independent(self):
        """Test that parameter order doesn't affect key."""
        key1 = CacheKeyGenerator.generate("sweep_row", {"epsilon": 1.0, "seed": 3})
        key2 = CacheKeyGenerator.generate("sweep_row", {"seed": 3, "epsilon": 1.0})

        assert key1 == key2

    def test_generate_seed_changes_key(self):
        """Test that rows of different repeats never share a key."""
        key1 = CacheKeyGenerator.generate("sweep_row", {"epsilon": 1.0, "seed": 3})
        key2 = CacheKeyGenerator.generate("sweep_row", {"epsilon": 1.0, "seed": 4})

        assert key1 != key2

    def test_generate_different_stages_different_keys(self):
        """Test that different stages generate different keys."""
        params = {"epsilon": 1.0}

        assert CacheKeyGenerator.generate("sweep_row", params) != CacheKeyGenerator.generate(
            "match_city", params
        )

    def test_generate_rejects_separator_in_stage(self):
        """Test that a stage containing ':' is rejected."""
        with pytest.raises(ValueError):
            CacheKeyGenerator.generate("sweep:row", {})

    def test_parse_valid_key(self):
        """Test parsing a valid cache key."""
        parsed = CacheKeyGenerator.parse("gridtrace:sweep_row:a3f8d9c2e1b4:v1")

        assert parsed["prefix"] == "gridtrace"
        assert parsed["stage"] == "sweep_row"
        assert parsed["params_hash"] == "a3f8d9c2e1b4"
        assert parsed["version"] == "v1"

    def test_parse_invalid_key_raises_error(self):
        """Test that parsing invalid key raises ValueError."""
        with pytest.raises(ValueError) as exc_info:
            CacheKeyGenerator.parse("gridtrace:sweep_row:invalid")

        assert "Invalid cache key format" in str(exc_info.value)

    def test_generate_hash_length(self):
        """Test that hash is exactly 12 characters."""
        key = CacheKeyGenerator.generate("sweep_row", {"epsilon": 0.5})

        assert len(key.split(":")[2]) == 12

    def test_generate_with_nested_params(self):
        """Test key generation with nested params."""
        params = {"point": {"level": 1.386, "radius_m": 1000.0}, "rasters": ["a:1", "b:2"]}
        key = CacheKeyGenerator.generate("sweep_row", params)

        assert CacheKeyGenerator.parse(key)["stage"] == "sweep_row"
