"""Moment tail bounds and the affine lower bound of the energy in the existence regime."""

import numpy as np

from energystudio.energy.growth import growth_condition_check
from energystudio.energy.kernel import KernelMatrix
from energystudio.energy.terms import total_energy
from energystudio.exceptions import GrowthConditionRefusal, PreconditionError
from energystudio.geometry.psi import log_psi_closed_form
from energystudio.logging_config import get_logger
from energystudio.measures.moments import first_moment, sinh_moment, tail_mass, total_mass
from energystudio.measures.schemas import DiscreteMeasure, Potential, RadialDensity

from .constants import cl_constants
from .schemas import EnergyLowerBound, TailBound

logger = get_logger("inequalities.tightness")

Measure = RadialDensity | DiscreteMeasure

GAMMA1_FACTOR = 0.5
MINORANT_THETA_MAX = 200.0
MINORANT_POINTS = 4000


def tightness_tail_bound(mu: Measure, lam: float, c_m: float, R: float) -> TailBound:
    """
    μ({r ≥ R}) against ∫(sinh(√c_m r)/√c_m)^λ dμ / (sinh(√c_m R)/√c_m)^λ.

    The bound is `inf` at R = 0 or when the moment diverges.

    Raises:
        PreconditionError: If λ ≤ 0 or R < 0.

    Example:
    !!! example
        ```python
        rho = uniform_ball(ModelManifold(dim=2, curvature=1.0), 1.0)
        tightness_tail_bound(rho, 3.0, 1.0, 2.0)  # tail_mass=0.0, holds=True
        ```
    """
    tail = tail_mass(mu, R)
    moment = sinh_moment(mu, lam, c_m)
    if R == 0 or not np.isfinite(moment):
        bound = float("inf")
    else:
        with np.errstate(over="ignore", divide="ignore"):
            bound = float(np.exp(np.log(moment) - lam * log_psi_closed_form(c_m, R)))
    holds = bool(tail <= bound * (1.0 + 1e-9) + 1e-15)
    return TailBound(R=R, tail_mass=tail, bound=bound, holds=holds)


def _minorant_grid(theta_max: float) -> np.ndarray:
    return np.concatenate([[0.0], np.geomspace(1e-6, theta_max, MINORANT_POINTS)])


def _difference(h: Potential, gamma1: float, lam: float, c_m: float, theta: np.ndarray) -> np.ndarray:
    """h − γ₁ψ^λ, resolved by logs where either term overflows."""
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        log_g = np.log(gamma1) + lam * log_psi_closed_form(c_m, theta)
        values = np.asarray(h(theta), dtype=float) - np.exp(log_g)
        overflow = ~np.isfinite(values)
        if np.any(overflow):
            log_h = np.asarray(h.log_evaluate(theta[overflow]), dtype=float)
            values[overflow] = np.where(log_h > log_g[overflow], np.inf, -np.inf)
    return values


def energy_lower_bound_check(
    mu: Measure,
    q: float,
    h: Potential,
    lam: float,
    c_m: float,
    gamma1_factor: float = GAMMA1_FACTOR,
    theta_max: float = MINORANT_THETA_MAX,
    kernel: KernelMatrix | None = None,
    tolerance: float = 1e-6,
) -> EnergyLowerBound:
    """
    Check E[μ] ≥ C̃₁ + C̃₂·∫r dμ.

    The constants come from h ≥ γ₁ψ^λ + γ₂ with ψ = sinh(√c_m θ)/√c_m, the
    Carlson–Levin inequality, the convexity inequality and ψ^λ ≥ γ̃₁θ + γ̃₂.
    γ₁ is `gamma1_factor` times the limit of ψ^λ/e^{√c_m λθ}, 2^λ c_m^{λ/2},
    reduced further when the sampled tail of h/e^{√c_m λθ} is below 1. Both
    infima are taken on a geometric grid up to `theta_max`.

    Args:
        mu (RadialDensity or DiscreteMeasure): Centred probability measure.
        q (float): Diffusion exponent in (0, 1).
        h (Potential): Interaction profile with h(0) = 0.
        lam (float): Growth exponent λ above the threshold.
        c_m (float): Curvature scale, at least the curvature of the measure's space.
        gamma1_factor (float): Factor in (0, 1) below the limiting coefficient.
        theta_max (float): End of the minorant grid.
        kernel (KernelMatrix): Prebuilt interaction kernel for radial densities.
        tolerance (float): Relative slack of the comparison.

    Returns:
        EnergyLowerBound: The energy, the bound and all constants.

    Raises:
        GrowthConditionRefusal: If h does not pass the existence growth check for (λ, c_m).
        PreconditionError: If μ is uncentred, not of unit mass, or c_m is too small.
    """
    if not 0 < gamma1_factor < 1:
        raise PreconditionError(f"The γ₁ factor must lie in (0, 1), got {gamma1_factor}.")
    if isinstance(mu, DiscreteMeasure):
        space_c = mu.curvature
        if not mu.centred:
            raise PreconditionError("The energy lower bound needs a centred measure.")
    else:
        space_c = mu.manifold.require_constant("energy_lower_bound_check")
    if c_m < space_c:
        raise PreconditionError(f"The scale c_m={c_m} is below the curvature {space_c}.")
    if abs(total_mass(mu) - 1.0) > 1e-6:
        raise PreconditionError(f"The energy lower bound needs a probability measure, got mass {total_mass(mu)}.")

    dim = mu.dim
    report = growth_condition_check(h, "exist_const", dim=dim, q=q, c=c_m, lam=lam)
    if not report.satisfied:
        raise GrowthConditionRefusal(
            f"h does not grow like exp(√c_m λθ) (trend: {report.classification.value}).",
            theorem=report.theorem,
            report=report,
        )

    constants = cl_constants(lam, q, c_m, dim)
    quarter = report.log_ratio[3 * report.log_ratio.size // 4 :]
    tail_level = float(np.exp(np.min(quarter)))
    gamma1 = gamma1_factor * 2.0**lam * c_m ** (lam / 2.0) * min(1.0, tail_level)

    theta = _minorant_grid(theta_max)
    difference = _difference(h, gamma1, lam, c_m, theta)
    gamma2 = float(np.min(difference))
    tail_monotone = bool(np.all(np.diff(difference[-MINORANT_POINTS // 10 :]) >= 0))

    gamma1_tilde = 1.0
    with np.errstate(over="ignore"):
        psi_power = np.exp(lam * log_psi_closed_form(c_m, theta))
    gamma2_tilde = float(np.min(psi_power - gamma1_tilde * theta))

    pq = constants.p * q
    X_star = (4.0 * constants.C1 * pq / (gamma1 * (1.0 - q))) ** (1.0 / (1.0 - pq))
    C2 = -constants.C1 / (1.0 - q) * X_star**pq + gamma1 / 4.0 * X_star
    C1_tilde = C2 + gamma2 / 2.0 + gamma1 * gamma2_tilde / 4.0
    C2_tilde = gamma1 * gamma1_tilde / 4.0

    moment = first_moment(mu)
    bound = C1_tilde + C2_tilde * moment
    energy = total_energy(mu, q, h, kernel).total
    holds = bool(energy >= bound - tolerance * max(1.0, abs(bound)))
    if not holds:
        logger.warning("Energy lower bound violated", extra={"energy": energy, "bound": bound})
    return EnergyLowerBound(
        energy=energy, bound=bound, holds=holds, first_moment=moment,
        gamma1=gamma1, gamma2=gamma2, gamma1_tilde=gamma1_tilde, gamma2_tilde=gamma2_tilde,
        C2=C2, C1_tilde=C1_tilde, C2_tilde=C2_tilde, theta_max=theta_max, tail_monotone=tail_monotone,
    )
