"""
Geo-indistinguishability via the planar Laplace mechanism.

Each sample's cell center is displaced in continuous meters by a polar
Laplace draw, snapped back to the cell containing the new point and
clamped to the grid.
"""

import math
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.sanitizers.base import SanitizationResult, UserResult, map_users, provenance
from src.sanitizers.lambertw import radial_quantile
from src.traces.store import TraceSet, Trajectory
from src.utils.logger import get_logger
from src.utils.rng import derive_rng

logger = get_logger(__name__)


class GeoIndConfig(BaseModel):
    """
    Planar Laplace parameters: epsilon in 1/m, or a (level, radius) pair.

    Example:
        >>> GeoIndConfig(level=math.log(4), radius_m=1000, seed=7).eps
        0.001386...
    """

    epsilon: Optional[float] = Field(None, gt=0, description="Privacy parameter per meter")
    level: Optional[float] = Field(None, gt=0, description="Privacy level l")
    radius_m: Optional[float] = Field(None, gt=0, description="Radius r in meters")
    seed: int = Field(..., ge=0, description="Master seed")

    @model_validator(mode="after")
    def check_parameterization(self) -> "GeoIndConfig":
        pair = self.level is not None and self.radius_m is not None
        if self.epsilon is None and not pair:
            raise ValueError("give epsilon, or both level and radius_m")
        if self.epsilon is not None and (self.level is not None or self.radius_m is not None):
            raise ValueError("give either epsilon or (level, radius_m), not both")
        return self

    @property
    def eps(self) -> float:
        if self.epsilon is not None:
            return self.epsilon
        return self.level / self.radius_m  # type: ignore[operator]


def geoind_sample(points: np.ndarray, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    """
    Perturb (n, 2) points in meters with planar Laplace noise.

    Draws theta ~ U[0, 2 pi) and p ~ U[0, 1) per point and moves it by the
    radius quantile at p in direction theta.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = points.shape[0]
    theta = rng.uniform(0.0, 2.0 * math.pi, size=n)
    p = rng.random(size=n)
    radius = np.asarray(radial_quantile(p, epsilon)).reshape(n)
    return points + np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])


def geoind_sanitize(
    ts: TraceSet, cfg: GeoIndConfig, workers: Optional[int] = None
) -> SanitizationResult:
    """
    Apply planar Laplace noise to every sample's cell center.

    User u draws from the stream (seed, "geoind", u). Points that land
    outside the grid are clamped to the nearest boundary cell; the number
    of clamped samples is recorded in the provenance counters.
    """
    grid = ts.grid
    size = grid.cell_size_m
    eps = cfg.eps

    def perturb(trajectory: Trajectory) -> UserResult:
        rng = derive_rng(cfg.seed, "geoind", trajectory.user)
        centers = np.column_stack([(trajectory.xs + 0.5) * size, (trajectory.ys + 0.5) * size])
        noisy = geoind_sample(centers, eps, rng)
        xs = np.floor(noisy[:, 0] / size).astype(np.int64)
        ys = np.floor(noisy[:, 1] / size).astype(np.int64)
        cx = np.clip(xs, 0, grid.width - 1)
        cy = np.clip(ys, 0, grid.height - 1)
        clamped = int(np.count_nonzero((cx != xs) | (cy != ys)))
        return cx, cy, {"clamped": clamped}

    traces, counters = map_users(ts, perturb, workers)
    parameters: Dict[str, object] = {
        "epsilon": eps,
        "level": cfg.level,
        "radius_m": cfg.radius_m,
        "cell_size_m": size,
    }
    logger.info(
        "geoind_sanitized",
        epsilon=eps,
        samples=ts.n_samples,
        clamped=counters.get("clamped", 0),
    )
    return SanitizationResult(traces, provenance("geoind", parameters, cfg.seed, ts, counters))
