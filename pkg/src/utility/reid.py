"""Home-work re-identification after sanitization."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.exceptions import ValidationError
from src.metrics.anchors import infer_all_anchors
from src.traces.store import TraceSet


@dataclass(frozen=True)
class AnchorReidResult:
    """
    Attributes:
        rate: Share of users whose home and work both match exactly
        within_one_rate: Share whose home and work are both within one cell
            (Chebyshev distance <= 1)
        home_errors: Euclidean cell distance of each user's home
        work_errors: Euclidean cell distance of each user's work
        users: Compared user ids, ascending
        excluded_users: Users lacking home or work on either side
    """

    rate: float
    within_one_rate: float
    home_errors: np.ndarray
    work_errors: np.ndarray
    users: np.ndarray
    excluded_users: int


def empirical_cdf(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Plot-ready empirical CDF.

    Returns:
        (sorted values, cumulative share i / n for i = 1..n)
    """
    ordered = np.sort(np.asarray(values, dtype=np.float64).ravel())
    n = ordered.size
    return ordered, np.arange(1, n + 1, dtype=np.float64) / max(n, 1)


def anchor_reid_rate(original: TraceSet, sanitized: TraceSet) -> AnchorReidResult:
    """
    Compare home and work anchors inferred before and after sanitization.

    Raises:
        ValidationError: If the user populations differ or no user has
            complete anchors on both sides
    """
    if not np.array_equal(original.user_ids, sanitized.user_ids):
        raise ValidationError("original and sanitized sets have different users", field="users")

    before = infer_all_anchors(original)
    after = infer_all_anchors(sanitized)
    users = [u for u in before if before[u].complete and after[u].complete]
    excluded = original.n_users - len(users)
    if not users:
        raise ValidationError("no user has home and work on both sides", field="users")

    home_a = np.array([before[u].home for u in users], dtype=np.float64)
    home_b = np.array([after[u].home for u in users], dtype=np.float64)
    work_a = np.array([before[u].work for u in users], dtype=np.float64)
    work_b = np.array([after[u].work for u in users], dtype=np.float64)

    home_errors = np.linalg.norm(home_a - home_b, axis=1)
    work_errors = np.linalg.norm(work_a - work_b, axis=1)
    exact = (home_errors == 0) & (work_errors == 0)
    near = (np.abs(home_a - home_b).max(axis=1) <= 1) & (np.abs(work_a - work_b).max(axis=1) <= 1)

    return AnchorReidResult(
        rate=float(exact.mean()),
        within_one_rate=float(near.mean()),
        home_errors=home_errors,
        work_errors=work_errors,
        users=np.array(users, dtype=np.int64),
        excluded_users=excluded,
    )
