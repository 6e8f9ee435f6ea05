"""
The convexity inequality for centred measures,

    ∫H(r_x) dμ(x) ≤ ∬H(d(x, y)) dμ(x) dμ(y),

for convex non-decreasing H ≥ 0, and its form (∫H(r) dμ)(∫dμ) ≤ ∬H(d) dμ dμ
for measures of any total mass.
"""

import numpy as np

from energystudio.energy.terms import pairwise_distances
from energystudio.exceptions import PreconditionError
from energystudio.logging_config import get_logger
from energystudio.measures.schemas import DiscreteMeasure, Potential

from .schemas import DEFAULT_TOLERANCE, InequalityReport

logger = get_logger("inequalities.convexity")

CONVEXITY_SAMPLES = 513


def check_convex_profile(H: Potential, theta_max: float) -> None:
    """
    Sampled check that H is non-negative, non-decreasing and convex on [0, theta_max].

    Raises:
        PreconditionError: If a sampled value or difference has the wrong sign.
    """
    theta = np.linspace(0.0, max(theta_max, 1e-12), CONVEXITY_SAMPLES)
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.asarray(H(theta), dtype=float)
    finite = values[np.isfinite(values)]
    scale = max(1.0, float(np.max(np.abs(finite)))) if finite.size else 1.0
    slack = 1e-12 * scale
    if np.any(finite < -slack):
        raise PreconditionError("The convex profile H must be non-negative.")
    first = np.diff(finite)
    if np.any(first < -slack):
        raise PreconditionError("The convex profile H must be non-decreasing.")
    if np.any(np.diff(first) < -slack):
        raise PreconditionError("The convex profile H must be convex on the sampled range.")


def _sides(mu: DiscreteMeasure, H: Potential) -> tuple[float, float]:
    distances = pairwise_distances(mu)
    check_convex_profile(H, float(np.max(distances)) if distances.size else 0.0)
    with np.errstate(over="ignore", invalid="ignore"):
        single = float(mu.weights @ H(mu.radii))
        double = float(mu.weights @ H(distances) @ mu.weights)
    return single, double


def _require_centred(mu: DiscreteMeasure, require_centred: bool) -> None:
    if require_centred and not mu.centred:
        raise PreconditionError("The convexity inequality needs a centred measure (Σ wᵢvᵢ = 0).")


def verify_convexity(
    mu: DiscreteMeasure,
    H: Potential,
    tolerance: float = DEFAULT_TOLERANCE,
    require_centred: bool = True,
    case_id: int | None = None,
) -> InequalityReport:
    """
    Check ∫H(r_x) dμ ≤ ∬H(d(x, y)) dμ dμ for a centred probability measure.

    Args:
        mu (DiscreteMeasure): Centred cloud of unit mass.
        H (Potential): Convex non-decreasing profile with H ≥ 0.
        tolerance (float): Relative tolerance.
        require_centred (bool): Refuse uncentred measures; disable only for negative controls.
        case_id (int): Campaign case number.

    Returns:
        InequalityReport: lhs = ∫H(r) dμ, rhs = ∬H(d) dμ dμ.

    Raises:
        PreconditionError: If the measure is uncentred (and required to be), not of unit mass, or H is not convex.

    Example:
    !!! example
        ```python
        cloud = make_centred_cloud(dim=2, c=1.0, n=100, seed=7)
        verify_convexity(cloud, Potential(kind="sinh_power", lam=3.0, c=1.0)).passed  # True
        ```
    """
    _require_centred(mu, require_centred)
    if abs(mu.total_mass - 1.0) > 1e-10:
        raise PreconditionError(
            f"verify_convexity needs a probability measure, got mass {mu.total_mass}; "
            "use verify_convexity_unnormalized."
        )
    single, double = _sides(mu, H)
    report = InequalityReport.compare(single, double, 1.0, tolerance, case_id=case_id, label="convexity")
    if not report.passed:
        logger.info("Convexity check failed", extra={"case_id": case_id, "centred": mu.centred})
    return report


def verify_convexity_unnormalized(
    mu: DiscreteMeasure,
    H: Potential,
    tolerance: float = DEFAULT_TOLERANCE,
    require_centred: bool = True,
    case_id: int | None = None,
) -> InequalityReport:
    """
    Check (∫H(r_x) dμ)·(∫dμ) ≤ ∬H(d(x, y)) dμ dμ for a centred measure of any mass.

    Both sides scale by t² under μ → tμ, so the ratio is scale invariant.
    """
    _require_centred(mu, require_centred)
    single, double = _sides(mu, H)
    return InequalityReport.compare(
        single * mu.total_mass, double, 1.0, tolerance, case_id=case_id, label="convexity_unnormalized"
    )
