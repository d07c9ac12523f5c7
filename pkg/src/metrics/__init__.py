"""Re-identification risk metrics.

This package provides:
- Spatio-temporal queries and k-anonymity risk
- m-point unicity
- Home / work / extra anchor uniqueness
- Seclusion exposure and sensitive-place uniqueness
"""

from src.metrics.anchors import (
    AnchorSignature,
    AnchorUniqueness,
    anchor_uniqueness,
    infer_all_anchors,
    infer_anchors,
)
from src.metrics.queries import (
    DELTA_GRID,
    K_THRESHOLDS,
    KAnonymityEstimate,
    QueryConstraint,
    QuerySpec,
    SampledQueries,
    candidate_set,
    k_anonymity_risk,
    sample_queries,
)
from src.metrics.seclusion import SeclusionExposure, seclusion_exposure
from src.metrics.sensitive import SensitiveUniqueness, sensitive_uniqueness
from src.metrics.unicity import UnicityCurve, unicity, unicity_curve

__all__ = [
    # Queries
    "DELTA_GRID",
    "K_THRESHOLDS",
    "QueryConstraint",
    "QuerySpec",
    "SampledQueries",
    "KAnonymityEstimate",
    "candidate_set",
    "sample_queries",
    "k_anonymity_risk",
    # Unicity
    "UnicityCurve",
    "unicity",
    "unicity_curve",
    # Anchors
    "AnchorSignature",
    "AnchorUniqueness",
    "infer_anchors",
    "infer_all_anchors",
    "anchor_uniqueness",
    # Exposure
    "SeclusionExposure",
    "seclusion_exposure",
    "SensitiveUniqueness",
    "sensitive_uniqueness",
]
