"""Location sanitizers.

This package provides:
- Planar Laplace geo-indistinguishability (with a lower-branch Lambert W solver)
- Generalized randomized response over cells, with frequency debiasing
- Per-user spatial de-structuring
"""

from src.sanitizers.base import SanitizationResult
from src.sanitizers.destructure import PermutationConfig, destructure
from src.sanitizers.geoind import GeoIndConfig, geoind_sample, geoind_sanitize
from src.sanitizers.grr import (
    DebiasedFrequencies,
    GrrConfig,
    grr_channel_matrix,
    grr_debias,
    grr_estimator_variance,
    grr_perturb,
    grr_sanitize,
)
from src.sanitizers.lambertw import lambertw_m1, radial_cdf, radial_quantile

__all__ = [
    "SanitizationResult",
    # Geo-indistinguishability
    "GeoIndConfig",
    "geoind_sample",
    "geoind_sanitize",
    "lambertw_m1",
    "radial_cdf",
    "radial_quantile",
    # Randomized response
    "GrrConfig",
    "DebiasedFrequencies",
    "grr_perturb",
    "grr_sanitize",
    "grr_debias",
    "grr_channel_matrix",
    "grr_estimator_variance",
    # De-structuring
    "PermutationConfig",
    "destructure",
]
