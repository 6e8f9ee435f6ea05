"""
Numerical checks of the Carlson–Levin type inequalities

    ∫ρ^q ≤ C₁ (∫ρ)^{(1−p)q} (∫ψ(r)^λ ρ)^{pq}

with ψ = sinh(√c_m r)/√c_m (constant lower curvature bound) or the solved
comparison function ψ_m (radially growing bound).
"""

import numpy as np

from energystudio.exceptions import PreconditionError
from energystudio.geometry.schemas import PsiSolution
from energystudio.logging_config import get_logger
from energystudio.measures.moments import psi_moment, sinh_moment
from energystudio.measures.radial import mass, radial_integral
from energystudio.measures.schemas import RadialDensity

from .constants import cl_constants, general_cl_constants
from .schemas import DEFAULT_TOLERANCE, CLConstants, InequalityReport

logger = get_logger("inequalities.carlson_levin")


def _rhs(constants: CLConstants, total: float, moment: float) -> float:
    p, q = constants.p, constants.q
    if moment == np.inf:
        return float("inf")
    return float(constants.C1 * total ** ((1.0 - p) * q) * moment ** (p * q))


def _report(constants: CLConstants, rho: RadialDensity, moment: float, tolerance: float, label: str,
            case_id: int | None) -> InequalityReport:
    lhs = radial_integral(rho, power=constants.q)
    rhs = _rhs(constants, mass(rho), moment)
    report = InequalityReport.compare(lhs, rhs, constants.C1, tolerance, case_id=case_id, label=label)
    if report.degenerate:
        logger.debug("Degenerate inequality check", extra={"label": label, "case_id": case_id})
    elif not report.passed:
        logger.warning(
            "Inequality violated", extra={"label": label, "case_id": case_id, "ratio": report.ratio}
        )
    return report


def verify_carlson_levin(
    rho: RadialDensity,
    lam: float,
    q: float,
    c_m: float | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    case_id: int | None = None,
) -> InequalityReport:
    """
    Check the constant-curvature inequality for a (not necessarily normalized) density.

    Args:
        rho (RadialDensity): Density on a constant-curvature manifold.
        lam (float): Moment exponent λ above the threshold.
        q (float): Diffusion exponent in (0, 1).
        c_m (float): Curvature scale, at least the manifold curvature; defaults to it.
        tolerance (float): Relative tolerance of the ratio test.
        case_id (int): Campaign case number.

    Returns:
        InequalityReport: Both sides and the ratio; degenerate if the moment diverges or ρ = 0.

    Raises:
        UnsupportedManifoldError: If the manifold is not of constant curvature.
        PreconditionError: If c_m is below the manifold curvature.
        ParameterError: If the parameters are outside the valid region.

    Example:
    !!! example
        ```python
        rho = uniform_ball(ModelManifold(dim=2, curvature=1.0), 1.0)
        verify_carlson_levin(rho, lam=3.0, q=0.5).passed  # True
        ```
    """
    c = rho.manifold.require_constant("verify_carlson_levin")
    c_m = c if c_m is None else c_m
    if c_m < c:
        raise PreconditionError(f"The scale c_m={c_m} is below the manifold curvature {c}.")
    constants = cl_constants(lam, q, c_m, rho.dim)
    moment = sinh_moment(rho, lam, c_m)
    return _report(constants, rho, moment, tolerance, "carlson_levin", case_id)


def _check_dominates(rho: RadialDensity, psi: PsiSolution) -> None:
    manifold = rho.manifold
    if rho.support_radius > psi.theta_max:
        raise PreconditionError(
            f"The density extends to {rho.support_radius:.6g}, beyond the solved range {psi.theta_max:.6g}."
        )
    theta = np.linspace(0.0, rho.support_radius, 257)
    if manifold.is_constant:
        curvature = np.full(theta.shape, float(manifold.curvature))
    else:
        curvature = np.asarray(manifold.profile(theta), dtype=float)
    if np.any(np.asarray(psi.profile(theta)) < curvature * (1.0 - 1e-12)):
        raise PreconditionError("The comparison profile must dominate the manifold curvature on the support.")


def verify_carlson_levin_general(
    rho: RadialDensity,
    lam: float,
    q: float,
    psi: PsiSolution,
    tolerance: float = DEFAULT_TOLERANCE,
    case_id: int | None = None,
) -> InequalityReport:
    """
    Check the variable-curvature inequality with ψ_m and the constants built from c_m(0).

    The density may live on a constant-curvature manifold or on the model
    warped by a profile; `psi` must solve a profile c_m that dominates the
    manifold curvature on the support.

    Raises:
        PreconditionError: If c_m does not dominate or the support exceeds the solved range.
        ParameterError: If c_m(0) = 0 or the parameters are outside the valid region.
    """
    rho.manifold.require_exact("verify_carlson_levin_general")
    _check_dominates(rho, psi)
    constants = general_cl_constants(lam, q, psi.profile, rho.dim)
    moment = psi_moment(rho, lam, psi)
    return _report(constants, rho, moment, tolerance, "carlson_levin_general", case_id)
