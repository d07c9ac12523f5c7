"""Derived random streams.

Every stochastic operation draws from a stream derived from the master seed
and a tuple of keys (stage name, user id, trial index, ...). Streams never
depend on scheduling, so results are identical for any worker count.
"""

import hashlib

import numpy as np

from src.exceptions import ValidationError


def key_to_int(key: object) -> int:
    """Map an arbitrary key to a stable 32-bit integer."""
    if isinstance(key, (int, np.integer)) and 0 <= int(key) < 2**32:
        return int(key)
    digest = hashlib.md5(repr(key).encode()).hexdigest()
    return int(digest[:8], 16)


def derive_seed_sequence(seed: int, *keys: object) -> np.random.SeedSequence:
    """
    Build the SeedSequence for (seed, *keys).

    The whole seed is the entropy and the keys form the spawn key, so
    distinct non-negative seeds never share a stream.

    Raises:
        ValidationError: If seed is negative
    """
    seed = int(seed)
    if seed < 0:
        raise ValidationError(f"must be >= 0, got {seed}", field="seed")
    return np.random.SeedSequence(seed, spawn_key=tuple(key_to_int(k) for k in keys))


def derive_rng(seed: int, *keys: object) -> np.random.Generator:
    """
    Return an independent generator for (seed, *keys).

    Example:
        >>> rng = derive_rng(7, "grr", 1042)
        >>> rng.random() == derive_rng(7, "grr", 1042).random()
        True
    """
    return np.random.default_rng(derive_seed_sequence(seed, *keys))
