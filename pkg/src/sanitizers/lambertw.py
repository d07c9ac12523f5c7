"""
Lower branch of the Lambert W function and the planar Laplace radius law.

W_{-1}(z) solves w * exp(w) = z with w <= -1 for z in [-1/e, 0). The
solver starts from the branch-point series near -1/e and from the log
asymptotic elsewhere, then runs Halley iterations.
"""

import numpy as np

from src.exceptions import LambertWDomainError, ValidationError

BRANCH_POINT = -1.0 / np.e
TOLERANCE = 1e-12
MAX_ITERATIONS = 64


def _initial_guess(z: np.ndarray) -> np.ndarray:
    guess = np.empty_like(z)
    near = z < -0.25
    if np.any(near):
        p = -np.sqrt(np.maximum(2.0 * (np.e * z[near] + 1.0), 0.0))
        guess[near] = -1.0 + p - p**2 / 3.0 + (11.0 / 72.0) * p**3
    far = ~near
    if np.any(far):
        l1 = np.log(-z[far])
        l2 = np.log(-l1)
        guess[far] = l1 - l2 + l2 / l1
    return guess


def lambertw_m1(z: np.ndarray | float) -> np.ndarray | float:
    """
    Evaluate W_{-1} elementwise to absolute tolerance 1e-12.

    Raises:
        LambertWDomainError: If any z lies outside [-1/e, 0)

    Example:
        >>> lambertw_m1(-0.1)
        -3.577152063957297
    """
    scalar = np.ndim(z) == 0
    values = np.atleast_1d(np.asarray(z, dtype=np.float64))
    # points within rounding of the branch point are treated as it
    values = np.where(np.abs(values - BRANCH_POINT) < 1e-15, BRANCH_POINT, values)
    if np.any(~np.isfinite(values)) or np.any(values < BRANCH_POINT) or np.any(values >= 0):
        raise LambertWDomainError("lower Lambert-W branch needs z in [-1/e, 0)")

    w = _initial_guess(values)
    at_branch = values == BRANCH_POINT
    w[at_branch] = -1.0
    active = ~at_branch

    for _ in range(MAX_ITERATIONS):
        if not np.any(active):
            break
        wa = w[active]
        ew = np.exp(wa)
        f = wa * ew - values[active]
        with np.errstate(divide="ignore", invalid="ignore"):
            denominator = ew * (wa + 1.0) - (wa + 2.0) * f / (2.0 * wa + 2.0)
            step = f / denominator
        step = np.where(np.isfinite(step), step, 0.0)
        w[active] = wa - step
        still = np.abs(step) > TOLERANCE
        idx = np.flatnonzero(active)
        active[idx[~still]] = False

    return float(w[0]) if scalar else w


def radial_cdf(r: np.ndarray | float, epsilon: float) -> np.ndarray | float:
    """Pr[R <= r] = 1 - (1 + eps r) exp(-eps r) for the planar Laplace radius."""
    if epsilon <= 0:
        raise ValidationError("must be > 0", field="epsilon")
    er = epsilon * np.asarray(r, dtype=np.float64)
    out = np.where(er > 0, 1.0 - (1.0 + er) * np.exp(-er), 0.0)
    return float(out) if np.ndim(out) == 0 else out


def radial_quantile(p: np.ndarray | float, epsilon: float) -> np.ndarray | float:
    """
    Inverse of radial_cdf: r = -(W_{-1}((p - 1) / e) + 1) / eps, for p in [0, 1).

    Raises:
        ValidationError: If epsilon <= 0
        LambertWDomainError: If any p lies outside [0, 1)
    """
    if epsilon <= 0:
        raise ValidationError("must be > 0", field="epsilon")
    w = lambertw_m1((np.asarray(p, dtype=np.float64) - 1.0) / np.e)
    r = -(np.asarray(w) + 1.0) / epsilon
    r = np.maximum(r, 0.0)
    return float(r) if np.ndim(r) == 0 else r
