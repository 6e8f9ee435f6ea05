import numpy as np
from scipy.optimize import brentq

from energystudio.energy.growth import require_above_threshold
from energystudio.exceptions import ParameterError, PreconditionError
from energystudio.geometry.psi import log_psi_closed_form
from energystudio.geometry.schemas import CurvatureProfile, PsiSolution
from energystudio.geometry.volumes import sphere_area

from .schemas import CLConstants


def cl_constants(lam: float, q: float, c_m: float, dim: int) -> CLConstants:
    """
    Closed-form constants of the Carlson–Levin type inequality.

    Args:
        lam (float): Moment exponent λ > (d−1)(1−q)/q.
        q (float): Diffusion exponent in (0, 1).
        c_m (float): Curvature scale c_m > 0.
        dim (int): Dimension d ≥ 2.

    Returns:
        CLConstants: p, α₁, α₂, β₁, β₂ and C₁.

    Raises:
        ParameterError: If λ is at or below the threshold, q is outside (0, 1), c_m ≤ 0 or d < 2.

    Example:
    !!! example
        ```python
        constants = cl_constants(lam=2.0, q=0.5, c_m=1.0, dim=2)
        constants.p, constants.beta1, constants.beta2  # 0.5, 0.5, 0.5
        ```
    """
    if dim < 2:
        raise ParameterError(f"The dimension must be at least 2, got {dim}.")
    require_above_threshold(lam, dim, q)
    if not c_m > 0:
        raise ParameterError(f"The curvature scale c_m must be positive, got {c_m}.")
    area = sphere_area(dim)
    root = np.sqrt(c_m)
    beta1 = (1.0 - q) * (dim - 1)
    beta2 = lam * q - beta1
    alpha1 = (area / (root * (dim - 1))) ** (1.0 - q)
    alpha2 = (area * (1.0 - q) / (root * beta2)) ** (1.0 - q)
    total = beta1 + beta2
    C1 = (alpha1**beta2 * alpha2**beta1) ** (1.0 / total) * (
        (beta2 / beta1) ** (beta1 / total) + (beta1 / beta2) ** (beta2 / total)
    )
    return CLConstants(
        lam=lam, q=q, c_m=c_m, dim=dim, p=beta1 / (lam * q),
        alpha1=alpha1, alpha2=alpha2, beta1=beta1, beta2=beta2, C1=C1,
    )


def general_cl_constants(lam: float, q: float, profile: CurvatureProfile, dim: int) -> CLConstants:
    """
    Constants of the variable-curvature inequality, built from √c_m(0).

    They coincide with `cl_constants` evaluated at c_m(0).

    Raises:
        ParameterError: If c_m(0) = 0 (a positive floor is required) or the other parameters are invalid.
    """
    c0 = float(profile(0.0))
    if not c0 > 0:
        raise ParameterError(
            "Variable-curvature constants need c_m(0) > 0; give the profile a positive floor."
        )
    return cl_constants(lam, q, c0, dim)


def _log_target(constants: CLConstants, mass: float, moment: float) -> float:
    if not (mass > 0 and moment > 0):
        raise PreconditionError(f"Mass and moment must be positive, got {mass} and {moment}.")
    c = constants
    return float(
        np.log(c.alpha2 * c.beta2 / (c.alpha1 * c.beta1)) + c.q * (np.log(moment) - np.log(mass))
    )


def _solve_increasing(g, upper_limit: float = np.inf) -> float:
    lo = hi = min(1.0, upper_limit)
    while g(lo) > 0:
        lo /= 2.0
    while g(hi) < 0:
        if hi >= upper_limit:
            raise PreconditionError(f"The optimal radius lies beyond the solved range {upper_limit}.")
        hi = min(2.0 * hi, upper_limit)
    return float(brentq(g, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500))


def optimal_R(lam: float, q: float, c_m: float, dim: int, mass: float, sinh_mom: float) -> float:
    """
    Radius R_* minimizing the split right-hand side, the root of

        (sinh(√c_m R)/√c_m)^{β₁+β₂} = (α₂β₂/(α₁β₁))·(sinh_mom/mass)^q.

    Raises:
        PreconditionError: If mass or sinh_mom is not positive.
    """
    constants = cl_constants(lam, q, c_m, dim)
    target = _log_target(constants, mass, sinh_mom)
    exponent = constants.beta1 + constants.beta2
    return _solve_increasing(lambda R: exponent * log_psi_closed_form(c_m, R) - target)


def optimal_R_general(lam: float, q: float, psi: PsiSolution, dim: int, mass: float, moment: float) -> float:
    """
    Variable-curvature version of `optimal_R`, with ψ_m in place of sinh(√c_m r)/√c_m.

    Raises:
        PreconditionError: If the root lies beyond the solved range of ψ_m.
    """
    constants = general_cl_constants(lam, q, psi.profile, dim)
    target = _log_target(constants, mass, moment)
    exponent = constants.beta1 + constants.beta2
    return _solve_increasing(lambda R: exponent * psi.log_evaluate(R) - target, psi.theta_max)


def optimal_R_residual(constants: CLConstants, R: float, mass: float, sinh_mom: float) -> float:
    """Relative residual of the defining equation of R_* at R."""
    log_lhs = (constants.beta1 + constants.beta2) * log_psi_closed_form(constants.c_m, R)
    return float(abs(np.expm1(log_lhs - _log_target(constants, mass, sinh_mom))))


def carlson_levin_rhs(
    R: float, constants: CLConstants, mass: float, moment: float, psi: PsiSolution | None = None
) -> float:
    """
    Right-hand side α₁ψ(R)^{β₁}(∫ρ)^q + α₂ψ(R)^{−β₂}(∫ψ^λρ)^q before optimizing over R.

    ψ is sinh(√c_m r)/√c_m unless a solved ψ_m is passed.
    """
    log_psi = psi.log_evaluate(R) if psi is not None else log_psi_closed_form(constants.c_m, R)
    c = constants
    with np.errstate(over="ignore"):
        return float(
            c.alpha1 * np.exp(c.beta1 * log_psi) * mass**c.q
            + c.alpha2 * np.exp(-c.beta2 * log_psi) * moment**c.q
        )
