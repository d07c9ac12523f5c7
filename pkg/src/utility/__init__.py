"""Utility evaluation of sanitized releases.

This package provides:
- Smoothed KL divergence between per-slot population distributions
- Home / work re-identification after sanitization
- Parameter sweeps over a mechanism with per-row caching
"""

from src.utility.divergence import (
    KL_SMOOTHING,
    SlotDivergence,
    kl_divergence,
    population_kl_over_time,
    slot_counts,
)
from src.utility.reid import AnchorReidResult, anchor_reid_rate, empirical_cdf
from src.utility.sweep import (
    METRIC_COLUMNS,
    PARAMETER_COLUMNS,
    sanitize,
    sanitizer_sweep,
    summarize_rows,
)

__all__ = [
    # Divergence
    "KL_SMOOTHING",
    "SlotDivergence",
    "kl_divergence",
    "population_kl_over_time",
    "slot_counts",
    # Re-identification
    "AnchorReidResult",
    "anchor_reid_rate",
    "empirical_cdf",
    # Sweeps
    "METRIC_COLUMNS",
    "PARAMETER_COLUMNS",
    "sanitize",
    "sanitizer_sweep",
    "summarize_rows",
]
