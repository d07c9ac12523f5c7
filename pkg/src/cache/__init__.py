"""Row caching for resumable sweeps.

This package provides:
- Cache key generation (CacheKeyGenerator)
- A file-backed cache-aside store (RowCache)
- Graceful fail-open behavior
"""

from src.cache.keys import CacheKeyGenerator
from src.cache.manager import RowCache

__all__ = [
    # Key generation
    "CacheKeyGenerator",
    # Cache store
    "RowCache",
]
