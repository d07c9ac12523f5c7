"""
Working / non-working day classification.

Day profiles are z-scored (per bin across days by default) and split by
2-means. The larger cluster is labelled B (working day) and the smaller
A (non-working day).
"""

from dataclasses import dataclass
from typing import List, Literal, Sequence

import numpy as np
from scipy.stats import zscore
from sklearn.cluster import KMeans

from src.exceptions import DegenerateClusteringError, ValidationError
from src.temporal.profiles import DayProfile, profile_matrix
from src.utils.logger import get_logger

logger = get_logger(__name__)

NON_WORKING = "A"
WORKING = "B"

Normalization = Literal["per_bin", "per_day"]


@dataclass(frozen=True)
class DayClassification:
    """
    Per-day class labels with the fitted 2-means model summary.

    Attributes:
        days: Day indices, in the order of labels
        labels: "A" (non-working) or "B" (working) per day
        centroids: (2, 48) centroids in z-scored space, row 0 = A, row 1 = B
        inertia: Within-cluster sum of squares of the chosen fit
    """

    days: np.ndarray
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float

    def label_of(self, day: int) -> str:
        index = np.flatnonzero(self.days == day)
        if index.size == 0:
            raise ValidationError(f"day {day} was not classified", field="day")
        return str(self.labels[index[0]])

    @property
    def working_days(self) -> List[int]:
        return [int(d) for d in self.days[self.labels == WORKING]]

    @property
    def non_working_days(self) -> List[int]:
        return [int(d) for d in self.days[self.labels == NON_WORKING]]

    def label_sequence(self) -> List[str]:
        """Labels ordered by day index."""
        return [str(self.labels[i]) for i in np.argsort(self.days, kind="stable")]


def _standardize(matrix: np.ndarray, normalization: Normalization) -> np.ndarray:
    axis = 0 if normalization == "per_bin" else 1
    spread = matrix.std(axis=axis)
    if not np.any(spread > 0):
        raise DegenerateClusteringError("every profile dimension has zero variance")
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = zscore(matrix, axis=axis)
    return np.nan_to_num(scaled, nan=0.0, posinf=0.0, neginf=0.0)


def classify_days(
    profiles: Sequence[DayProfile],
    seed: int,
    normalization: Normalization = "per_bin",
    n_init: int = 50,
    max_iter: int = 300,
) -> DayClassification:
    """
    Split days into two classes by k-means on z-scored profiles.

    Args:
        profiles: At least two day profiles
        seed: Seed for k-means++ initialization
        normalization: "per_bin" standardizes each bin across days,
            "per_day" standardizes each day across its bins
        n_init: Number of k-means restarts
        max_iter: Iteration cap per restart

    Returns:
        DayClassification; B is the larger cluster, and on equal sizes the
        cluster with the higher mean raw activity

    Raises:
        ValidationError: With fewer than two profiles
        DegenerateClusteringError: If the profiles cannot form two classes
    """
    if len(profiles) < 2:
        raise ValidationError(f"need >= 2 profiles, got {len(profiles)}", field="profiles")
    if normalization not in ("per_bin", "per_day"):
        raise ValidationError(f"unknown normalization {normalization!r}", field="normalization")

    raw = profile_matrix(profiles)
    scaled = _standardize(raw, normalization)
    if np.unique(scaled, axis=0).shape[0] < 2:
        raise DegenerateClusteringError("fewer than two distinct profiles after scaling")

    model = KMeans(
        n_clusters=2, init="k-means++", n_init=n_init, max_iter=max_iter, random_state=seed
    )
    assignment = model.fit_predict(scaled)
    sizes = np.bincount(assignment, minlength=2)
    if np.any(sizes == 0):
        raise DegenerateClusteringError(f"k-means produced an empty cluster: sizes={sizes}")

    activity = np.array([raw[assignment == k].sum(axis=1).mean() for k in (0, 1)])
    if sizes[0] != sizes[1]:
        working_cluster = int(np.argmax(sizes))
    else:
        working_cluster = int(np.argmax(activity))

    labels = np.where(assignment == working_cluster, WORKING, NON_WORKING)
    centroids = model.cluster_centers_[[1 - working_cluster, working_cluster]]
    days = np.array([p.day for p in profiles], dtype=np.int64)

    logger.info(
        "days_classified",
        days=len(profiles),
        working=int((labels == WORKING).sum()),
        non_working=int((labels == NON_WORKING).sum()),
        normalization=normalization,
        inertia=round(float(model.inertia_), 6),
    )
    return DayClassification(
        days=days, labels=labels, centroids=centroids, inertia=float(model.inertia_)
    )
