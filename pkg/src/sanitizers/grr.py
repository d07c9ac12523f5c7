"""
Generalized randomized response over the cell domain.

Cells map to indices 0..k-1 row-major (y * W + x). Each sample keeps its
index with probability p and otherwise moves to one of the other k - 1
indices uniformly, so every wrong index has probability q and p / q = e^eps.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.exceptions import ValidationError
from src.sanitizers.base import SanitizationResult, UserResult, map_users, provenance
from src.traces.grid import GridSpec
from src.traces.store import TraceSet, Trajectory
from src.utils.logger import get_logger
from src.utils.rng import derive_rng

logger = get_logger(__name__)

MAX_CHANNEL_DOMAIN = 4096


class GrrConfig(BaseModel):
    """
    GRR parameters over a k-cell domain.

    p and q are computed as 1 / (1 + (k - 1) e^-eps) and e^-eps * p, which
    equal e^eps / (e^eps + k - 1) and 1 / (e^eps + k - 1) without
    overflowing for large eps.

    Example:
        >>> cfg = GrrConfig(epsilon=math.log(2), k=3, seed=0)
        >>> cfg.p, cfg.q
        (0.5, 0.25)
    """

    epsilon: float = Field(..., gt=0, description="Privacy budget per point")
    k: int = Field(..., ge=2, description="Domain size (number of cells)")
    seed: int = Field(..., ge=0, description="Master seed")

    @classmethod
    def for_grid(cls, grid: GridSpec, epsilon: float, seed: int) -> "GrrConfig":
        return cls(epsilon=epsilon, k=grid.n_cells, seed=seed)

    @property
    def p(self) -> float:
        return 1.0 / (1.0 + (self.k - 1) * np.exp(-self.epsilon))

    @property
    def q(self) -> float:
        return float(np.exp(-self.epsilon)) * self.p


def grr_perturb(indices: np.ndarray, cfg: GrrConfig, rng: np.random.Generator) -> np.ndarray:
    """Pass cell indices through the GRR channel."""
    indices = np.asarray(indices, dtype=np.int64)
    n = indices.shape[0]
    keep = rng.random(size=n) < cfg.p
    replacement = rng.integers(0, cfg.k - 1, size=n)
    replacement += replacement >= indices
    return np.where(keep, indices, replacement)


def grr_sanitize(
    ts: TraceSet, cfg: GrrConfig, workers: Optional[int] = None
) -> SanitizationResult:
    """
    Randomize every sample's cell independently.

    User u draws from the stream (seed, "grr", u).

    Raises:
        ValidationError: If cfg.k differs from the grid's cell count
    """
    grid = ts.grid
    if cfg.k != grid.n_cells:
        raise ValidationError(f"k={cfg.k} but grid has {grid.n_cells} cells", field="k")

    def perturb(trajectory: Trajectory) -> UserResult:
        rng = derive_rng(cfg.seed, "grr", trajectory.user)
        original = grid.flat_index(trajectory.xs, trajectory.ys)
        noisy = grr_perturb(original, cfg, rng)
        xs, ys = grid.unflatten(noisy)
        return xs, ys, {"kept": int(np.count_nonzero(noisy == original))}

    traces, counters = map_users(ts, perturb, workers)
    counters["replaced"] = ts.n_samples - counters.get("kept", 0)
    parameters: Dict[str, object] = {"epsilon": cfg.epsilon, "k": cfg.k, "p": cfg.p, "q": cfg.q}
    logger.info("grr_sanitized", epsilon=cfg.epsilon, k=cfg.k, kept=counters.get("kept", 0))
    return SanitizationResult(traces, provenance("grr", parameters, cfg.seed, ts, counters))


@dataclass(frozen=True)
class DebiasedFrequencies:
    """
    Attributes:
        raw: Unbiased estimate (f~ - q) / (p - q); may be negative
        clipped: raw clipped at 0 and renormalized to sum 1 (uniform when
            everything clips to 0)
    """

    raw: np.ndarray
    clipped: np.ndarray


def grr_debias(observed: np.ndarray, cfg: GrrConfig) -> DebiasedFrequencies:
    """
    Invert the GRR channel on an observed frequency vector.

    Raises:
        ValidationError: If observed is not a length-k probability vector
    """
    observed = np.asarray(observed, dtype=np.float64)
    if observed.shape != (cfg.k,):
        raise ValidationError(
            f"expected {cfg.k} frequencies, got {observed.shape}", field="observed"
        )
    if np.any(observed < 0) or not np.isclose(observed.sum(), 1.0, atol=1e-6):
        raise ValidationError("observed must be a probability vector", field="observed")

    p, q = cfg.p, cfg.q
    raw = (observed - q) / (p - q)
    clipped = np.clip(raw, 0.0, None)
    total = clipped.sum()
    clipped = clipped / total if total > 0 else np.full(cfg.k, 1.0 / cfg.k)
    return DebiasedFrequencies(raw=raw, clipped=clipped)


def grr_channel_matrix(cfg: GrrConfig) -> np.ndarray:
    """
    Channel matrix C[v, x] = Pr[output v | input x].

    Raises:
        ValidationError: If k exceeds 4096
    """
    if cfg.k > MAX_CHANNEL_DOMAIN:
        raise ValidationError(f"k={cfg.k} exceeds {MAX_CHANNEL_DOMAIN}", field="k")
    matrix = np.full((cfg.k, cfg.k), cfg.q)
    np.fill_diagonal(matrix, cfg.p)
    return matrix


def grr_estimator_variance(f: np.ndarray, n: int, cfg: GrrConfig) -> np.ndarray:
    """
    Per-cell variance of the debiased estimate from n perturbed samples.

    With f~ = q + (p - q) f, Var = f~ (1 - f~) / (n (p - q)^2).
    """
    if n < 1:
        raise ValidationError("must be >= 1", field="n")
    f = np.asarray(f, dtype=np.float64)
    observed = cfg.q + (cfg.p - cfg.q) * f
    return observed * (1.0 - observed) / (n * (cfg.p - cfg.q) ** 2)
