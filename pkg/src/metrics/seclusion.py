"""Seclusion exposure: how much of a user's trace falls in rarely visited cells."""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from src.exceptions import ValidationError
from src.traces.store import TraceSet


@dataclass(frozen=True)
class SeclusionExposure:
    """
    Attributes:
        kappa: Visitor threshold
        users: User ids, ascending
        exposure: SE_kappa per user, in [0, 1]
    """

    kappa: int
    users: np.ndarray
    exposure: np.ndarray

    @property
    def exposed_users(self) -> int:
        return int(np.count_nonzero(self.exposure > 0))

    def as_row(self) -> Dict[str, object]:
        return {
            "kappa": self.kappa,
            "users": int(self.users.size),
            "exposed_users": self.exposed_users,
            "mean_exposure": float(self.exposure.mean()) if self.exposure.size else 0.0,
        }


def seclusion_exposure(ts: TraceSet, kappa: int) -> SeclusionExposure:
    """
    Share of each user's samples in cells with at most kappa distinct visitors.

    Raises:
        ValidationError: If kappa < 1
    """
    if kappa < 1:
        raise ValidationError("must be >= 1", field="kappa")
    secluded = ts.visitor_counts[ts.cell_indices] <= kappa
    hits = np.bincount(ts.user_positions, weights=secluded, minlength=ts.n_users)
    with np.errstate(invalid="ignore", divide="ignore"):
        exposure = np.where(ts.samples_per_user > 0, hits / ts.samples_per_user, 0.0)
    return SeclusionExposure(kappa=int(kappa), users=ts.user_ids, exposure=exposure)
