"""File-backed row cache with fail-open error handling.

RowCache implements the cache-aside pattern over one JSON file per key in
a directory. Every failure to read or write degrades to a cache miss, so
a damaged cache never breaks a run.
"""

import json
import os
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from src.utils.logger import get_logger

logger = get_logger(__name__)


class RowCache:
    """
    Cache-aside store for sweep rows and other resumable stage outputs.

    Attributes:
        directory: Folder holding one ``<key>.json`` file per entry, or None
            for a disabled cache that always misses
    """

    def __init__(self, directory: Optional[Path | str] = None) -> None:
        self.directory = Path(directory) if directory is not None else None
        if self.directory is not None:
            try:
                self.directory.mkdir(parents=True, exist_ok=True)
            except OSError as e:
                logger.error(
                    "cache_directory_unavailable",
                    directory=str(self.directory),
                    error=str(e),
                    error_type=type(e).__name__,
                )
                self.directory = None

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def _path(self, key: str) -> Path:
        assert self.directory is not None
        return self.directory / (key.replace(":", "_") + ".json")

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        """
        Retrieve the cached value for key, or None on a miss.

        Example:
            >>> cache = RowCache(".cache")
            >>> cache.get("gridtrace:sweep_row:5d1c0e6a9b2f:v1")
        """
        if not self.enabled:
            return None

        path = self._path(key)
        if not path.is_file():
            logger.debug("cache_miss", key=key)
            return None

        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
            if entry.get("key") != key:
                raise ValueError("key mismatch")
            logger.debug("cache_hit", key=key)
            return entry["data"]

        except (json.JSONDecodeError, ValueError, KeyError) as e:
            logger.error("cache_get_decode_error", key=key, error=str(e))
            # Invalid cached data - delete it
            self.delete(key)
            return None

        except OSError as e:
            logger.error(
                "cache_get_error", key=key, error=str(e), error_type=type(e).__name__
            )
            return None

    def set(self, key: str, value: Dict[str, Any]) -> bool:
        """
        Store value (must be JSON-serializable) under key.

        Returns:
            True if cached successfully, False otherwise
        """
        if not self.enabled:
            return False

        path = self._path(key)
        tmp = path.with_suffix(".tmp")
        try:
            tmp.write_text(
                json.dumps({"key": key, "data": value}, sort_keys=True), encoding="utf-8"
            )
            os.replace(tmp, path)
            logger.debug("cache_set", key=key)
            return True

        except (TypeError, ValueError) as e:
            logger.error(
                "cache_set_serialization_error",
                key=key,
                error=str(e),
                error_type=type(e).__name__,
            )
            return False

        except OSError as e:
            logger.error(
                "cache_set_error", key=key, error=str(e), error_type=type(e).__name__
            )
            return False

    def delete(self, key: str) -> bool:
        """Delete the entry for key; True if a file was removed."""
        if not self.enabled:
            return False
        try:
            self._path(key).unlink()
            logger.debug("cache_delete", key=key)
            return True
        except FileNotFoundError:
            return False
        except OSError as e:
            logger.error(
                "cache_delete_error", key=key, error=str(e), error_type=type(e).__name__
            )
            return False

    def get_or_compute(
        self,
        key: str,
        compute: Callable[[], Dict[str, Any]],
        cache_if: Optional[Callable[[Dict[str, Any]], bool]] = None,
    ) -> Dict[str, Any]:
        """
        Get from cache or compute and cache (cache-aside pattern).

        A computed value is stored only when cache_if accepts it, so
        results such as failed rows are recomputed on the next run.

        Args:
            key: Cache key
            compute: Function producing the value on a miss
            cache_if: Predicate deciding whether a computed value is stored

        Returns:
            Dictionary with structure {"data": <value>, "metadata": {"cached": bool}}

        Example:
            >>> result = cache.get_or_compute(key, lambda: run_row(point))
            >>> result["metadata"]["cached"]
            False
        """
        cached = self.get(key)
        if cached is not None:
            logger.info("cache_hit_get_or_compute", key=key)
            return {"data": cached, "metadata": {"cached": True}}

        try:
            data = compute()
        except Exception as e:
            logger.error(
                "compute_function_error", key=key, error=str(e), error_type=type(e).__name__
            )
            # Re-raise the compute error (don't swallow it)
            raise

        if cache_if is None or cache_if(data):
            self.set(key, data)
        else:
            logger.debug("cache_skip", key=key)
        return {"data": data, "metadata": {"cached": False}}
