"""
Explicit upper and lower bounds for the comparison function ψ.

All bounds are computed in log form internally and returned as plain floats,
which may be `inf` for very large radii.
"""

from enum import Enum
from typing import NamedTuple

import numpy as np

from energystudio.exceptions import PreconditionError
from energystudio.logging_config import get_logger
from energystudio.quadrature import cumulative_integral, integrate

from .schemas import CurvatureProfile, PsiSolution

logger = get_logger("geometry.bounds")


class BoundSide(str, Enum):
    BELOW = "below"
    ABOVE = "above"
    EQUAL = "equal"


class LowerBound(NamedTuple):
    bound: float
    holds: bool


class Sandwich(NamedTuple):
    bound: float
    side: BoundSide


def _exp(log_value: float) -> float:
    with np.errstate(over="ignore"):
        return float(np.exp(log_value))


def sqrt_curvature_integral(profile: CurvatureProfile, a: float, b: float) -> float:
    """∫_a^b √c(t) dt by composite Gauss–Legendre quadrature."""
    return integrate(profile.sqrt, a, b).value


def psi_upper_bound(profile: CurvatureProfile, theta: float) -> float:
    """
    Upper bound ψ(θ) ≤ θ·exp(∫₀^θ √c) valid for non-decreasing profiles.

    Args:
        profile (CurvatureProfile): Profile with `monotone_nondecreasing` set.
        theta (float): Radius θ ≥ 0.

    Returns:
        float: The bound (0 at θ = 0).

    Raises:
        PreconditionError: If the profile is not flagged non-decreasing.
    """
    if not profile.monotone_nondecreasing:
        raise PreconditionError("psi_upper_bound requires a profile flagged monotone_nondecreasing.")
    if theta < 0:
        raise PreconditionError(f"Radius must be non-negative, got {theta}.")
    if theta == 0:
        return 0.0
    return _exp(np.log(theta) + sqrt_curvature_integral(profile, 0.0, theta))


def _tolerance_slack(psi: PsiSolution) -> float:
    return max(1e-9, 100.0 * psi.tolerance)


def psi_lower_bound(
    profile: CurvatureProfile, epsilon: float, theta0: float, theta: float, psi: PsiSolution
) -> LowerBound:
    """
    Lower bound ψ(θ) ≥ ψ(θ₀)·exp((1−ε)∫_{θ₀}^θ √c) for θ ≥ θ₀.

    The estimate is only guaranteed once θ₀ is large enough, so the check
    against `psi` is part of the result.

    Args:
        profile (CurvatureProfile): Profile with `satisfies_c32` set.
        epsilon (float): Relaxation ε in (0, 1).
        theta0 (float): Anchor radius θ₀ > 0.
        theta (float): Radius θ ≥ θ₀.
        psi (PsiSolution): Solution used for ψ(θ₀) and the check at θ.

    Returns:
        LowerBound: The bound and whether ψ(θ) ≥ bound holds within tolerance.

    Raises:
        PreconditionError: If θ < θ₀, θ₀ ≤ 0, ε is outside (0, 1) or the flag is unset.

    Example:
    !!! example
        ```python
        bound, holds = psi_lower_bound(profile, 0.5, 1.0, 3.0, solution)
        # c ≡ 1: bound = sinh(1)·e ≈ 3.1945, holds is True
        ```
    """
    if not profile.satisfies_c32:
        raise PreconditionError("psi_lower_bound requires a profile flagged satisfies_c32.")
    if not 0 < epsilon < 1:
        raise PreconditionError(f"The relaxation epsilon must lie in (0, 1), got {epsilon}.")
    if not theta0 > 0:
        raise PreconditionError(f"The anchor theta0 must be positive, got {theta0}.")
    if theta < theta0:
        raise PreconditionError(f"Radius {theta} lies below the anchor theta0={theta0}.")

    log_bound = psi.log_evaluate(theta0) + (1.0 - epsilon) * sqrt_curvature_integral(
        profile, theta0, theta
    )
    holds = bool(psi.log_evaluate(theta) >= log_bound - _tolerance_slack(psi))
    return LowerBound(bound=_exp(log_bound), holds=holds)


def find_theta0(profile: CurvatureProfile, epsilon: float, psi: PsiSolution) -> float:
    """
    Smallest grid radius θ₀ from which the relaxed lower bound holds on the rest of the grid.

    With L(θ) = log ψ(θ) − (1−ε)∫₀^θ √c, the bound anchored at θ₀ holds at
    every later θ exactly when L(θ₀) ≤ min_{θ ≥ θ₀} L(θ).

    Raises:
        PreconditionError: If ε is outside (0, 1).
    """
    if not 0 < epsilon < 1:
        raise PreconditionError(f"The relaxation epsilon must lie in (0, 1), got {epsilon}.")
    grid = psi.theta_grid[1:]
    integral = cumulative_integral(profile.sqrt, psi.theta_grid, order=8)[1:]
    excess = psi.log_psi[1:] - (1.0 - epsilon) * integral
    suffix_min = np.minimum.accumulate(excess[::-1])[::-1]
    candidates = np.nonzero(excess <= suffix_min + _tolerance_slack(psi))[0]
    theta0 = float(grid[candidates[0]])
    logger.debug("Found anchor radius", extra={"epsilon": epsilon, "theta0": theta0})
    return theta0


def psi_sandwich(profile: CurvatureProfile, R: float, psi: PsiSolution, theta: float) -> Sandwich:
    """
    Pivot estimate ψ(R)·exp(√c(R)(θ−R)).

    For a non-decreasing profile it bounds ψ(θ) from below when θ > R and from
    above when θ < R. At θ = R it equals ψ(R), so it bounds from both sides.

    Args:
        profile (CurvatureProfile): Non-decreasing profile.
        R (float): Pivot radius R > 0.
        psi (PsiSolution): Solution supplying ψ(R).
        theta (float): Radius θ > 0.

    Returns:
        Sandwich: The bound and the side it sits on.
    """
    if not profile.monotone_nondecreasing:
        raise PreconditionError("psi_sandwich requires a profile flagged monotone_nondecreasing.")
    if not R > 0 or not theta > 0:
        raise PreconditionError(f"Pivot and radius must be positive, got R={R}, theta={theta}.")
    log_bound = psi.log_evaluate(R) + float(profile.sqrt(R)) * (theta - R)
    if theta == R:
        side = BoundSide.EQUAL
    else:
        side = BoundSide.BELOW if theta > R else BoundSide.ABOVE
    return Sandwich(bound=_exp(log_bound), side=side)


def warped_sectional_curvatures(psi: PsiSolution) -> tuple[np.ndarray, np.ndarray]:
    """
    Sectional curvatures of the model warped by ψ, on the grid radii θ > 0.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Radial curvatures −c(θ) and tangential
            curvatures −(ψ′² − 1)/ψ².
    """
    theta = psi.theta_grid[1:]
    radial = -np.asarray(psi.profile(theta), dtype=float)
    log_psi = psi.log_psi[1:]
    with np.errstate(over="ignore", under="ignore"):
        tangential = -(np.exp(2.0 * (psi.log_dpsi[1:] - log_psi)) - np.exp(-2.0 * log_psi))
    return radial, tangential
