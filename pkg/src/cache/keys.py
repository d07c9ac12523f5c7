"""Cache key generation for consistent, deterministic cache keys.

This module provides the CacheKeyGenerator class for generating
hashed cache keys from pipeline stage names and parameters.
"""

from typing import Any, Dict

from src.utils.digests import params_hash as hash_params
from src.utils.logger import get_logger

logger = get_logger(__name__)


class CacheKeyGenerator:
    """
    Generate consistent cache keys for resumable pipeline stages.

    Cache keys follow the pattern: gridtrace:{stage}:{params_hash}:{version}

    The params_hash is the MD5 of the JSON-serialized parameters with
    sorted keys, so the same parameters always give the same key.

    Attributes:
        VERSION: Cache schema version (increment when row format changes)
    """

    PREFIX = "gridtrace"
    VERSION = "v1"

    @staticmethod
    def generate(stage: str, params: Dict[str, Any]) -> str:
        """
        Generate cache key for one stage invocation.

        Args:
            stage: Pipeline stage (e.g., "sweep_row")
            params: Everything the stage output depends on

        Returns:
            Cache key string in format: gridtrace:{stage}:{hash}:{version}

        Example:
            >>> params = {"mechanism": "grr", "epsilon": 2.0, "seed": 7}
            >>> CacheKeyGenerator.generate("sweep_row", params)
            'gridtrace:sweep_row:5d1c0e6a9b2f:v1'
        """
        if ":" in stage:
            raise ValueError(f"stage name must not contain ':', got {stage!r}")

        params_hash = hash_params(params)
        cache_key = f"{CacheKeyGenerator.PREFIX}:{stage}:{params_hash}:{CacheKeyGenerator.VERSION}"

        logger.debug("cache_key_generated", stage=stage, params_hash=params_hash)
        return cache_key

    @staticmethod
    def parse(cache_key: str) -> Dict[str, str]:
        """
        Parse cache key back to components.

        Returns:
            Dictionary with prefix, stage, params_hash and version

        Raises:
            ValueError: If cache key format is invalid

        Example:
            >>> CacheKeyGenerator.parse("gridtrace:sweep_row:5d1c0e6a9b2f:v1")["stage"]
            'sweep_row'
        """
        parts = cache_key.split(":")

        if len(parts) != 4:
            raise ValueError(
                f"Invalid cache key format: {cache_key}. "
                f"Expected 4 parts separated by ':', got {len(parts)}"
            )

        return {
            "prefix": parts[0],
            "stage": parts[1],
            "params_hash": parts[2],
            "version": parts[3],
        }
