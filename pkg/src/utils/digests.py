"""Content digests for artifacts, inputs and manifests."""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict

import numpy as np


def file_sha256(path: Path) -> str:
    """Return the hex sha256 of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def arrays_sha256(*arrays: np.ndarray) -> str:
    """Return a sha256 over the raw bytes, dtypes and shapes of arrays."""
    digest = hashlib.sha256()
    for array in arrays:
        contiguous = np.ascontiguousarray(array)
        digest.update(str(contiguous.dtype).encode())
        digest.update(str(contiguous.shape).encode())
        digest.update(contiguous.tobytes())
    return digest.hexdigest()


def params_hash(params: Dict[str, Any], length: int = 12) -> str:
    """
    Hash a parameter mapping independently of key order.

    Example:
        >>> params_hash({"b": 1, "a": 2}) == params_hash({"a": 2, "b": 1})
        True
    """
    payload = json.dumps(params, sort_keys=True, default=str)
    return hashlib.md5(payload.encode()).hexdigest()[:length]
