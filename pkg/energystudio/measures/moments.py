"""Weighted radial moments of radial densities and discrete measures."""

import numpy as np

from energystudio.exceptions import PreconditionError
from energystudio.geometry.psi import log_psi_closed_form
from energystudio.geometry.schemas import PsiSolution
from energystudio.logging_config import get_logger

from .radial import radial_integral
from .schemas import DiscreteMeasure, RadialDensity

logger = get_logger("measures.moments")

Measure = RadialDensity | DiscreteMeasure


def _finite_or_inf(value: float, name: str) -> float:
    if np.isfinite(value):
        return float(value)
    logger.warning("Moment diverged numerically", extra={"moment": name})
    return float("inf")


def _default_curvature(mu: Measure) -> float:
    if isinstance(mu, DiscreteMeasure):
        return mu.curvature
    return mu.manifold.require_constant("sinh_moment without an explicit curvature")


def sinh_moment(mu: Measure, lam: float, c: float | None = None) -> float:
    """
    ∫ (sinh(√c r)/√c)^λ dμ, with sinh(√c r)/√c read as r when c = 0.

    Densities are supported on their grid, so the integral is a finite sum of
    cell integrals; it is reported as `inf` only when it overflows.

    Args:
        mu (RadialDensity or DiscreteMeasure): The measure.
        lam (float): Exponent λ > 0.
        c (float): Curvature scale; defaults to the measure's constant curvature.

    Returns:
        float: The moment, or `inf` on divergence.

    Raises:
        PreconditionError: If λ ≤ 0 or c < 0.
    """
    if not lam > 0:
        raise PreconditionError(f"The moment exponent must be positive, got {lam}.")
    c = _default_curvature(mu) if c is None else float(c)
    if c < 0:
        raise PreconditionError(f"The curvature scale must be non-negative, got {c}.")
    if isinstance(mu, DiscreteMeasure):
        with np.errstate(over="ignore", divide="ignore"):
            value = np.sum(mu.weights * np.exp(lam * log_psi_closed_form(c, mu.radii)))
    else:
        value = radial_integral(mu, log_factor=lambda r: lam * log_psi_closed_form(c, r))
    return _finite_or_inf(value, "sinh")


def psi_moment(mu: Measure, lam: float, psi: PsiSolution) -> float:
    """
    ∫ ψ(r)^λ dμ for a solved warping function ψ.

    A constant profile uses the closed form, so the result agrees exactly with
    `sinh_moment`. λ = 0 gives the mass.

    Raises:
        PreconditionError: If λ < 0 or the measure extends beyond the solved range of ψ.
    """
    if lam < 0:
        raise PreconditionError(f"The moment exponent must be non-negative, got {lam}.")
    if psi.profile.kind == "constant":

        def log_weight(r):
            return log_psi_closed_form(float(psi.profile.value), r)

    else:
        log_weight = psi.log_evaluate

    if isinstance(mu, DiscreteMeasure):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            logs = np.where(mu.radii > 0, lam * log_weight(mu.radii), 0.0 if lam == 0 else -np.inf)
            value = np.sum(mu.weights * np.exp(logs))
    elif lam == 0:
        value = radial_integral(mu)
    else:
        value = radial_integral(mu, log_factor=lambda r: lam * log_weight(r))
    return _finite_or_inf(value, "psi")


def first_moment(mu: Measure) -> float:
    """∫ r dμ, the first radial moment."""
    if isinstance(mu, DiscreteMeasure):
        return float(np.sum(mu.weights * mu.radii))
    with np.errstate(divide="ignore"):
        return _finite_or_inf(radial_integral(mu, log_factor=np.log), "first")


def tail_mass(mu: Measure, R: float) -> float:
    """μ({r ≥ R})."""
    if R < 0:
        raise PreconditionError(f"Radius must be non-negative, got {R}.")
    if isinstance(mu, DiscreteMeasure):
        return float(np.sum(mu.weights[mu.radii >= R]))
    return radial_integral(mu, lower=R)


def total_mass(mu: Measure) -> float:
    if isinstance(mu, DiscreteMeasure):
        return mu.total_mass
    return radial_integral(mu)
