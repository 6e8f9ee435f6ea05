"""
Euclidean limit of the interaction form of the Carlson–Levin inequality.

Combined with the convexity inequality, the Carlson–Levin inequality becomes

    C₁^{−1/(pq)} (∫ρ^q)^{1/(pq)} (∫ρ)^{−(1−2p)/p} ≤ ∬(sinh(√c d)/√c)^λ ρ ρ,

which holds on ℝ^d for every c > 0. As c → 0 the right-hand side tends to
∬d^λ ρ ρ and the constant tends to 0.
"""

import numpy as np

from energystudio.energy.terms import interaction_energy, kernel_for
from energystudio.exceptions import PreconditionError
from energystudio.logging_config import get_logger
from energystudio.measures.radial import mass, radial_integral
from energystudio.measures.schemas import Potential, RadialDensity

from .constants import cl_constants
from .schemas import DEFAULT_TOLERANCE, InequalityReport, ReversedHLSReport

logger = get_logger("inequalities.reversed_hls")

C_SEQUENCE = (1e-1, 1e-2, 1e-3, 1e-4)
KERNEL_NODES = 96


def _log_reversed_constant(lam: float, q: float, c: float, dim: int) -> float:
    constants = cl_constants(lam, q, c, dim)
    return -np.log(constants.C1) / (constants.p * constants.q)


def _extrapolate(values: np.ndarray) -> float:
    """Aitken Δ² limit of the last three terms, clamped at 0."""
    if values.size < 3:
        return float(max(values[-1], 0.0))
    x0, x1, x2 = values[-3:]
    denominator = x2 - 2.0 * x1 + x0
    if denominator == 0:
        return float(max(x2, 0.0))
    return float(max(x2 - (x2 - x1) ** 2 / denominator, 0.0))


def _interaction_moment(rho: RadialDensity, h: Potential, lam: float, kernel_nodes: int) -> float:
    # ∬ f(d) ρρ = 2·(½∬ h(d) ρρ) · (f/h)
    energy = interaction_energy(rho, h, kernel_for(rho, h, max_nodes=kernel_nodes))
    return 2.0 * lam * energy if h.kind == "power" else 2.0 * energy


def reversed_hls_check(
    rho: RadialDensity,
    lam: float,
    q: float,
    c_sequence=C_SEQUENCE,
    tolerance: float = DEFAULT_TOLERANCE,
    kernel_nodes: int = KERNEL_NODES,
    case_id: int | None = None,
) -> ReversedHLSReport:
    """
    Evaluate the constants along a decreasing c sequence and check the inequality on ℝ^d.

    Args:
        rho (RadialDensity): Density on Euclidean space (curvature 0).
        lam (float): Exponent λ above the threshold.
        q (float): Diffusion exponent in (0, 1).
        c_sequence (Sequence[float]): Strictly decreasing positive curvature scales.
        tolerance (float): Relative tolerance.
        kernel_nodes (int): Grid nodes of the interaction kernels.
        case_id (int): Campaign case number.

    Returns:
        ReversedHLSReport: Constant sequence, extrapolated constant, and the checks.

    Raises:
        PreconditionError: If the density is not on Euclidean space or the sequence is not decreasing.
    """
    c = rho.manifold.require_constant("reversed_hls_check")
    if c != 0:
        raise PreconditionError(f"reversed_hls_check needs Euclidean space, got curvature {c}.")
    c_values = np.asarray(c_sequence, dtype=float)
    if c_values.size < 2 or np.any(c_values <= 0) or np.any(np.diff(c_values) >= 0):
        raise PreconditionError("The curvature sequence must be positive and strictly decreasing.")

    p = cl_constants(lam, q, float(c_values[0]), rho.dim).p
    log_constants = np.array([_log_reversed_constant(lam, q, ck, rho.dim) for ck in c_values])
    constants = np.exp(log_constants)
    differences = np.abs(np.diff(constants))
    cauchy = bool(np.all(np.diff(differences) < 0)) if differences.size > 1 else True
    limit = _extrapolate(constants)

    total = mass(rho)
    log_core = np.log(radial_integral(rho, power=q)) / (p * q) - (1.0 - 2.0 * p) / p * np.log(total)

    finite_c = []
    for ck, log_constant in zip(c_values, log_constants):
        rhs = _interaction_moment(rho, Potential(kind="sinh_power", lam=lam, c=float(ck)), lam, kernel_nodes)
        lhs = float(np.exp(log_constant + log_core))
        finite_c.append(
            InequalityReport.compare(lhs, rhs, float(np.exp(log_constant)), tolerance,
                                     case_id=case_id, label=f"reversed_hls_c={ck:g}")
        )
    euclidean_rhs = _interaction_moment(rho, Potential(kind="power", beta=lam), lam, kernel_nodes)
    euclidean = InequalityReport.compare(
        float(limit * np.exp(log_core)), euclidean_rhs, limit, tolerance, case_id=case_id, label="reversed_hls"
    )
    logger.debug("Reversed HLS sequence", extra={"constants": constants.tolist(), "limit": limit})
    return ReversedHLSReport(
        c_values=c_values,
        constants=constants,
        differences=differences,
        cauchy=cauchy,
        limit_constant=limit,
        euclidean=euclidean,
        finite_c=finite_c,
    )
