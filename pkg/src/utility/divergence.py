"""
KL divergence between population distributions.

Distributions are smoothed additively (alpha = 1e-9 per cell) and
renormalized before comparison, so cells empty on one side do not make the
divergence infinite.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.special import rel_entr

from src.exceptions import DegeneracyError, ValidationError
from src.sanitizers.grr import GrrConfig, grr_debias
from src.traces.store import BINS_PER_DAY, TraceSet
from src.utils.logger import get_logger

logger = get_logger(__name__)

KL_SMOOTHING = 1e-9


def kl_divergence(p: np.ndarray, q: np.ndarray, alpha: float = KL_SMOOTHING) -> float:
    """
    KL(p || q) in nats after additive smoothing and renormalization.

    Raises:
        ValidationError: On shape mismatch, empty input or negative entries

    Example:
        >>> kl_divergence(np.array([1.0, 0.0]), np.array([0.5, 0.5]))
        0.693147...
    """
    p = np.asarray(p, dtype=np.float64).ravel()
    q = np.asarray(q, dtype=np.float64).ravel()
    if p.shape != q.shape or p.size == 0:
        raise ValidationError(f"shape mismatch {p.shape} vs {q.shape}", field="distribution")
    if np.any(p < 0) or np.any(q < 0):
        raise ValidationError("entries must be >= 0", field="distribution")

    p = (p + alpha) / (p + alpha).sum()
    q = (q + alpha) / (q + alpha).sum()
    return max(0.0, float(rel_entr(p, q).sum()))


def slot_counts(ts: TraceSet) -> sparse.csr_matrix:
    """Visit counts as a sparse (D * 48, cells) matrix, one row per time slot."""
    n_slots = ts.day_count * BINS_PER_DAY
    data = np.ones(ts.n_samples, dtype=np.float64)
    return sparse.csr_matrix(
        (data, (ts.slots, ts.cell_indices)), shape=(n_slots, ts.grid.n_cells)
    )


@dataclass(frozen=True)
class SlotDivergence:
    """
    Attributes:
        mean: Mean KL over compared slots
        slots: Slot indices (day * 48 + bin) that were compared
        values: KL per compared slot
    """

    mean: float
    slots: np.ndarray
    values: np.ndarray


def population_kl_over_time(
    original: TraceSet, sanitized: TraceSet, debias: Optional[GrrConfig] = None
) -> SlotDivergence:
    """
    Mean KL between per-slot population distributions.

    Only slots with at least one sample on both sides are compared. With
    ``debias`` the sanitized distribution is passed through grr_debias and
    its clipped, renormalized estimate is used.

    Raises:
        ValidationError: If the grids or day counts differ
        DegeneracyError: If no slot is populated on both sides
    """
    if original.grid != sanitized.grid or original.day_count != sanitized.day_count:
        raise ValidationError("original and sanitized sets use different grids", field="grid")

    before = slot_counts(original)
    after = slot_counts(sanitized)
    totals_before = np.asarray(before.sum(axis=1)).ravel()
    totals_after = np.asarray(after.sum(axis=1)).ravel()
    slots = np.flatnonzero((totals_before > 0) & (totals_after > 0))
    if slots.size == 0:
        raise DegeneracyError("no time slot is populated in both sets")

    values = np.empty(slots.size, dtype=np.float64)
    for i, slot in enumerate(slots):
        truth = before.getrow(slot).toarray().ravel() / totals_before[slot]
        observed = after.getrow(slot).toarray().ravel() / totals_after[slot]
        if debias is not None:
            observed = grr_debias(observed, debias).clipped
        values[i] = kl_divergence(truth, observed)

    mean = float(values.mean())
    logger.debug("population_kl_computed", slots=int(slots.size), mean=mean)
    return SlotDivergence(mean=mean, slots=slots, values=values)
