"""
Spatio-temporal queries and k-anonymity risk.

A query is a list of (cell, bin window, day) constraints. A user matches
when every constraint is witnessed by at least one of their samples; the
anonymity set size k(Q) is the number of matching users. Sampled queries
come from one user's own samples (linkage semantics), so k(Q) >= 1.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.exceptions import ValidationError
from src.traces.store import BINS_PER_DAY, TraceSet
from src.utils.logger import get_logger
from src.utils.rng import derive_rng
from src.utils.workers import run_bounded

logger = get_logger(__name__)

K_THRESHOLDS = (1, 2, 5, 10)
DELTA_GRID = (0, 1, 2, 4)


class QueryConstraint(BaseModel):
    """Cell visited at some bin in [bin_lo, bin_hi], on ``day`` or any day."""

    model_config = ConfigDict(frozen=True)

    cell: Tuple[int, int]
    bin_lo: int = Field(..., ge=0, le=BINS_PER_DAY - 1)
    bin_hi: int = Field(..., ge=0, le=BINS_PER_DAY - 1)
    day: Optional[int] = Field(None, ge=0, description="None matches any day")

    @model_validator(mode="after")
    def check_window(self) -> "QueryConstraint":
        if self.bin_hi < self.bin_lo:
            raise ValueError(f"empty window [{self.bin_lo}, {self.bin_hi}]")
        return self


class QuerySpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    constraints: Tuple[QueryConstraint, ...] = Field(..., min_length=1)


def _constraint_users(ts: TraceSet, constraint: QueryConstraint) -> np.ndarray:
    x, y = ts.grid.require(constraint.cell)
    positions = ts.sample_positions(y * ts.grid.width + x)
    bins = ts.bins[positions]
    mask = (bins >= constraint.bin_lo) & (bins <= constraint.bin_hi)
    if constraint.day is not None:
        mask &= ts.days[positions] == constraint.day
    return np.unique(ts.users[positions[mask]])


def candidate_set(ts: TraceSet, query: QuerySpec) -> np.ndarray:
    """
    Sorted user ids matching every constraint of query.

    Raises:
        CellOutOfGridError: If a constraint cell lies outside the grid
    """
    users: Optional[np.ndarray] = None
    for constraint in query.constraints:
        matched = _constraint_users(ts, constraint)
        users = matched if users is None else np.intersect1d(users, matched, assume_unique=True)
        if users.size == 0:
            break
    return users if users is not None else np.zeros(0, dtype=np.int64)


@dataclass(frozen=True)
class SampledQueries:
    """Queries drawn for one (m, delta) point, with their owners."""

    m: int
    delta: int
    queries: List[QuerySpec]
    owners: List[int]
    eligible_users: int
    excluded_users: int


def _eligible_positions(ts: TraceSet, m: int) -> np.ndarray:
    eligible = np.flatnonzero(ts.samples_per_user >= m)
    if eligible.size == 0:
        raise ValidationError(f"no user has >= {m} samples", field="m")
    return eligible


def sample_queries(ts: TraceSet, m: int, delta: int, trials: int, seed: int) -> SampledQueries:
    """
    Draw the queries k_anonymity_risk evaluates.

    Each trial picks an eligible user (>= m samples) uniformly, picks m of
    their samples without replacement and turns each into a same-day
    constraint with window [bin - delta, bin + delta] clipped to the day.
    Trial t draws from the stream (seed, "kanon", m, delta, t).

    Raises:
        ValidationError: On m < 1, delta < 0, trials < 1, or no eligible user
    """
    if m < 1:
        raise ValidationError("must be >= 1", field="m")
    if delta < 0:
        raise ValidationError("must be >= 0", field="delta")
    if trials < 1:
        raise ValidationError("must be >= 1", field="trials")

    eligible = _eligible_positions(ts, m)
    queries: List[QuerySpec] = []
    owners: List[int] = []
    for trial in range(trials):
        rng = derive_rng(seed, "kanon", m, delta, trial)
        position = int(eligible[rng.integers(eligible.size)])
        user = int(ts.user_ids[position])
        span = ts.user_slice(user)
        picks = span.start + rng.choice(span.stop - span.start, size=m, replace=False)
        constraints = tuple(
            QueryConstraint(
                cell=(int(ts.xs[i]), int(ts.ys[i])),
                bin_lo=max(0, int(ts.bins[i]) - delta),
                bin_hi=min(BINS_PER_DAY - 1, int(ts.bins[i]) + delta),
                day=int(ts.days[i]),
            )
            for i in sorted(picks.tolist())
        )
        queries.append(QuerySpec(constraints=constraints))
        owners.append(user)

    return SampledQueries(
        m=m,
        delta=delta,
        queries=queries,
        owners=owners,
        eligible_users=int(eligible.size),
        excluded_users=ts.n_users - int(eligible.size),
    )


@dataclass(frozen=True)
class KAnonymityEstimate:
    """Pr[k(Q) <= k] for each threshold, over sampled queries."""

    m: int
    delta: int
    trials: int
    k_values: np.ndarray
    probabilities: Dict[int, float] = field(default_factory=dict)
    excluded_users: int = 0

    def as_row(self) -> Dict[str, object]:
        row: Dict[str, object] = {"m": self.m, "delta": self.delta, "trials": self.trials}
        row.update({f"pr_k_le_{k}": p for k, p in self.probabilities.items()})
        row["excluded_users"] = self.excluded_users
        return row


def k_anonymity_risk(
    ts: TraceSet,
    m: int,
    delta: int,
    trials: int,
    seed: int,
    thresholds: Sequence[int] = K_THRESHOLDS,
    workers: Optional[int] = None,
) -> KAnonymityEstimate:
    """
    Estimate Pr[k(Q) <= k] for queries of m same-user points.

    Args:
        ts: Trajectories
        m: Points per query
        delta: Window half-width in bins
        trials: Number of sampled queries
        seed: Master seed
        thresholds: k values to report
        workers: Concurrency cap for query evaluation

    Returns:
        KAnonymityEstimate with every query's k and the threshold table
    """
    sampled = sample_queries(ts, m, delta, trials, seed)
    ts.build_index()
    k_values = np.asarray(
        run_bounded(lambda q: candidate_set(ts, q).size, sampled.queries, workers),
        dtype=np.int64,
    )
    probabilities = {int(k): float(np.mean(k_values <= k)) for k in thresholds}
    logger.info(
        "k_anonymity_estimated",
        m=m,
        delta=delta,
        trials=trials,
        pr_unique=probabilities.get(1),
        excluded_users=sampled.excluded_users,
    )
    return KAnonymityEstimate(
        m=m,
        delta=delta,
        trials=trials,
        k_values=k_values,
        probabilities=probabilities,
        excluded_users=sampled.excluded_users,
    )
