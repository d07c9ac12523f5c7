"""Shared plumbing for per-user, space-only sanitizers."""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from src.models.reports import Provenance
from src.traces.store import TraceSet, Trajectory
from src.utils.workers import run_bounded

UserResult = Tuple[np.ndarray, np.ndarray, Dict[str, int]]


@dataclass(frozen=True)
class SanitizationResult:
    """Sanitized trajectories plus the provenance sidecar."""

    traces: TraceSet
    provenance: Provenance


def map_users(
    ts: TraceSet,
    func: Callable[[Trajectory], UserResult],
    workers: Optional[int] = None,
) -> Tuple[TraceSet, Dict[str, int]]:
    """
    Relabel every user's cells with func and reassemble the TraceSet.

    func returns new (xs, ys) for one trajectory plus counters. Users are
    processed independently and reassembled in user order, so the output
    does not depend on scheduling.
    """
    ts.build_index()
    results: List[UserResult] = run_bounded(func, list(ts), workers)
    if results:
        xs = np.concatenate([r[0] for r in results])
        ys = np.concatenate([r[1] for r in results])
    else:
        xs = ys = np.zeros(0, dtype=np.int64)

    counters: Dict[str, int] = {"users": ts.n_users, "samples": ts.n_samples}
    for _, _, extra in results:
        for name, value in extra.items():
            counters[name] = counters.get(name, 0) + int(value)
    return ts.with_cells(xs, ys), counters


def provenance(
    mechanism: str, parameters: Dict[str, object], seed: int, ts: TraceSet,
    counters: Dict[str, int],
) -> Provenance:
    return Provenance(
        mechanism=mechanism,
        parameters=parameters,
        seed=seed,
        input_digest=ts.digest(),
        counters=counters,
    )
