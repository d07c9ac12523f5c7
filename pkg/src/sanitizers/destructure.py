"""
Per-user spatial de-structuring.

Every user gets an independent random relabeling of cells. Only the
images of the user's own visited cells matter, so for the full-grid scope
those images are drawn directly as an ordered sample without replacement,
which has the same law as restricting a uniform permutation of all k
indices.
"""

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.sanitizers.base import SanitizationResult, UserResult, map_users, provenance
from src.traces.store import TraceSet, Trajectory
from src.utils.logger import get_logger
from src.utils.rng import derive_rng

logger = get_logger(__name__)


class PermutationConfig(BaseModel):
    seed: int = Field(..., ge=0, description="Master seed")
    scope: Literal["grid", "visited"] = Field(
        "grid", description="Permute over all grid cells or only the user's visited cells"
    )
    identity: bool = Field(False, description="Use the identity permutation for every user")


def destructure(
    ts: TraceSet, cfg: PermutationConfig, workers: Optional[int] = None
) -> SanitizationResult:
    """
    Relabel each user's cells through a private bijection.

    User u draws from the stream (seed, "destructure", u). Per-user visit
    count multisets are preserved; the global per-cell marginal is not.
    """
    grid = ts.grid
    parameters = {"scope": cfg.scope, "identity": cfg.identity}

    if cfg.identity:
        counters = {"users": ts.n_users, "samples": ts.n_samples}
        return SanitizationResult(
            ts.with_cells(ts.xs, ts.ys),
            provenance("destructure", parameters, cfg.seed, ts, counters),
        )

    def relabel(trajectory: Trajectory) -> UserResult:
        rng = derive_rng(cfg.seed, "destructure", trajectory.user)
        cells = grid.flat_index(trajectory.xs, trajectory.ys)
        visited, inverse = np.unique(cells, return_inverse=True)
        if cfg.scope == "grid":
            images = rng.choice(grid.n_cells, size=visited.size, replace=False)
        else:
            images = visited[rng.permutation(visited.size)]
        xs, ys = grid.unflatten(np.asarray(images, dtype=np.int64)[inverse])
        return xs, ys, {"visited_cells": int(visited.size)}

    traces, counters = map_users(ts, relabel, workers)
    logger.info("destructured", scope=cfg.scope, users=ts.n_users)
    return SanitizationResult(traces, provenance("destructure", parameters, cfg.seed, ts, counters))
