"""
m-point unicity.

A point is an exact (cell, day, bin) triple. A trial draws one user and a
random ordering of their points; the m-point set is the first m points of
that ordering, so curves over several m share draws and are monotone.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.exceptions import ValidationError
from src.traces.store import TraceSet
from src.utils.logger import get_logger
from src.utils.rng import derive_rng
from src.utils.workers import run_bounded

logger = get_logger(__name__)


class _PointIndex:
    """Sorted (slot, cell) keys with their owners, for exact point lookup."""

    def __init__(self, ts: TraceSet) -> None:
        keys = ts.slots * ts.grid.n_cells + ts.cell_indices
        order = np.argsort(keys, kind="stable")
        self.keys = keys[order]
        self.users = ts.users[order]
        self.ts = ts

    def owners(self, key: int) -> np.ndarray:
        lo = np.searchsorted(self.keys, key, side="left")
        hi = np.searchsorted(self.keys, key, side="right")
        return self.users[lo:hi]

    def key_of(self, position: int) -> int:
        ts = self.ts
        return int(ts.slots[position]) * ts.grid.n_cells + int(ts.cell_indices[position])


@dataclass(frozen=True)
class UnicityCurve:
    """
    Unicity estimates for several m from shared nested draws.

    Attributes:
        ms: Point counts, ascending
        values: U(m) per entry of ms
        unique_counts: Trials with exactly one matching user, per m
        trials: Trials per m
        excluded_users: Users with fewer than max(ms) samples
    """

    ms: List[int]
    values: List[float]
    unique_counts: List[int]
    trials: int
    excluded_users: int

    def as_rows(self) -> List[Dict[str, object]]:
        return [
            {
                "m": m,
                "unicity": value,
                "unique_trials": count,
                "trials": self.trials,
                "excluded_users": self.excluded_users,
            }
            for m, value, count in zip(self.ms, self.values, self.unique_counts)
        ]


def unicity_curve(
    ts: TraceSet,
    ms: Sequence[int],
    trials: int,
    seed: int,
    workers: Optional[int] = None,
) -> UnicityCurve:
    """
    Estimate U(m) for every m in ms with nested point draws.

    Trial t draws from the stream (seed, "unicity", t): a user uniformly
    among those with >= max(ms) samples, then a permutation of that user's
    samples. U(m) is the share of trials whose first m points are
    contained in exactly one user's trace.

    Raises:
        ValidationError: On empty ms, m < 1, trials < 1, or no eligible user
    """
    ms = sorted({int(m) for m in ms})
    if not ms or ms[0] < 1:
        raise ValidationError("need at least one m >= 1", field="m")
    if trials < 1:
        raise ValidationError("must be >= 1", field="trials")

    largest = ms[-1]
    eligible = np.flatnonzero(ts.samples_per_user >= largest)
    if eligible.size == 0:
        raise ValidationError(f"no user has >= {largest} samples", field="m")

    index = _PointIndex(ts)

    def run_trial(trial: int) -> List[bool]:
        rng = derive_rng(seed, "unicity", trial)
        user = int(ts.user_ids[eligible[rng.integers(eligible.size)]])
        span = ts.user_slice(user)
        ordering = span.start + rng.permutation(span.stop - span.start)[:largest]
        unique_at = []
        candidates: Optional[np.ndarray] = None
        taken = 0
        for m in ms:
            while taken < m:
                owners = index.owners(index.key_of(int(ordering[taken])))
                candidates = (
                    owners
                    if candidates is None
                    else np.intersect1d(candidates, owners, assume_unique=True)
                )
                taken += 1
            unique_at.append(candidates is not None and candidates.size == 1)
        return unique_at

    outcomes = np.asarray(run_bounded(run_trial, range(trials), workers), dtype=bool)
    unique_counts = outcomes.sum(axis=0).astype(int).tolist()
    values = [c / trials for c in unique_counts]

    logger.info(
        "unicity_estimated",
        ms=ms,
        values=[round(v, 4) for v in values],
        trials=trials,
        excluded_users=ts.n_users - int(eligible.size),
    )
    return UnicityCurve(
        ms=ms,
        values=values,
        unique_counts=unique_counts,
        trials=trials,
        excluded_users=ts.n_users - int(eligible.size),
    )


def unicity(ts: TraceSet, m: int, trials: int, seed: int, workers: Optional[int] = None) -> float:
    """
    U(m): share of m-point draws that single out exactly one user.

    Example:
        >>> unicity(ts, m=2, trials=1000, seed=7)
        0.97
    """
    return unicity_curve(ts, [m], trials, seed, workers).values[0]
