"""
Growth conditions on the interaction potential at infinity.

Each condition compares h(θ) with an exponential comparator built from a
curvature bound. The comparison happens in log form on a geometric θ-grid, so
double-exponential comparators never overflow.
"""

import numpy as np

from energystudio.exceptions import ParameterError, PreconditionError
from energystudio.geometry.psi import log_psi_closed_form
from energystudio.geometry.schemas import CurvatureProfile
from energystudio.logging_config import get_logger
from energystudio.measures.schemas import Potential
from energystudio.quadrature import cumulative_integral

from .schemas import GrowthClass, GrowthMode, GrowthReport, RatioLimit

logger = get_logger("energy.growth")

GROWTH_THETA_MIN = 1.0
GROWTH_THETA_MAX = 200.0
GROWTH_POINTS = 400
SLOPE_TOL = 1e-2
LOG_RATIO_FLOOR = -700.0

THEOREMS: dict[str, str] = {
    "nonexist_const": "nonexistence by spreading under a constant upper curvature bound",
    "exist_const": "existence of a global minimizer under a constant lower curvature bound",
    "nonexist_var": "nonexistence by spreading under a radially growing upper curvature bound",
    "exist_var": "existence of a global minimizer under a radially growing lower curvature bound",
}

EXPECTED = {
    "nonexist_const": GrowthClass.VANISHING,
    "nonexist_var": GrowthClass.VANISHING,
    "exist_const": GrowthClass.BOUNDED_AWAY_FROM_ZERO,
    "exist_var": GrowthClass.BOUNDED_AWAY_FROM_ZERO,
}


def exponent_threshold(dim: int, q: float) -> float:
    """(d−1)(1−q)/q, the growth exponent an existence condition has to exceed."""
    return (dim - 1) * (1.0 - q) / q


def require_above_threshold(lam: float, dim: int, q: float) -> None:
    """
    Raises:
        ParameterError: If q is outside (0, 1) or λ ≤ (d−1)(1−q)/q.
    """
    if not 0 < q < 1:
        raise ParameterError(f"The diffusion exponent q must lie in (0, 1), got {q}.")
    threshold = exponent_threshold(dim, q)
    if not lam > threshold:
        raise ParameterError(
            f"The exponent λ={lam} must exceed the threshold (d−1)(1−q)/q = {threshold:.6g}."
        )


def _sqrt_integral(profile: CurvatureProfile, upper: np.ndarray) -> np.ndarray:
    """∫₀^u √c for every u in a non-decreasing array (zero where u ≤ 0)."""
    positive = upper > 0
    out = np.zeros_like(upper)
    if np.any(positive):
        nodes = np.concatenate([[0.0], upper[positive]])
        out[positive] = cumulative_integral(profile.sqrt, nodes, order=16)[1:]
    return out


def log_comparator(
    mode: GrowthMode,
    theta: np.ndarray,
    *,
    dim: int,
    q: float,
    c: float | None = None,
    profile: CurvatureProfile | None = None,
    lam: float | None = None,
    delta: float = 0.0,
    epsilon: float = 0.5,
) -> np.ndarray:
    """
    Log of the comparator function of a growth condition.

    - nonexist_const: √c_M (d−1)(1−q) θ/2
    - exist_const: √c_m λ θ
    - nonexist_var: (1−ε)(d−1)(1−q) ∫₀^{θ/2−δ} √c_M
    - exist_var: λ ∫₀^θ √c_m
    """
    theta = np.asarray(theta, dtype=float)
    if mode == "nonexist_const":
        return np.sqrt(c) * (dim - 1) * (1.0 - q) * theta / 2.0
    if mode == "exist_const":
        return np.sqrt(c) * lam * theta
    if mode == "nonexist_var":
        return (1.0 - epsilon) * (dim - 1) * (1.0 - q) * _sqrt_integral(profile, theta / 2.0 - delta)
    return lam * _sqrt_integral(profile, theta)


def closed_form_log_comparator(
    mode: GrowthMode,
    theta: np.ndarray,
    *,
    dim: int,
    q: float,
    profile: CurvatureProfile,
    lam: float | None = None,
    delta: float = 0.0,
    epsilon: float = 0.5,
) -> np.ndarray:
    """
    Closed forms of the variable-curvature comparators for power and exponential profiles.

    Power law c = θ^k (zero floor): ∫₀^u √c = u^{k/2+1}/(k/2+1).
    Exponential law c = A·e^{βθ}: ∫₀^u √c = (2√A/β)(e^{βu/2} − 1).

    Raises:
        PreconditionError: If the mode is not a variable-curvature mode or the profile has no closed form.
    """
    if mode not in {"nonexist_var", "exist_var"}:
        raise PreconditionError(f"Closed-form comparators exist for variable modes only, got '{mode}'.")
    theta = np.asarray(theta, dtype=float)
    upper = np.maximum(theta / 2.0 - delta, 0.0) if mode == "nonexist_var" else theta
    if profile.kind == "power" and profile.floor == 0:
        e = profile.k / 2.0 + 1.0
        integral = upper**e / e
    elif profile.kind == "exponential":
        integral = 2.0 * np.sqrt(profile.amplitude) / profile.beta * np.expm1(profile.beta * upper / 2.0)
    else:
        raise PreconditionError(f"No closed-form comparator for a '{profile.kind}' profile.")
    if mode == "nonexist_var":
        return (1.0 - epsilon) * (dim - 1) * (1.0 - q) * integral
    return lam * integral


def _classify(theta: np.ndarray, log_ratio: np.ndarray, log_comp: np.ndarray) -> tuple[GrowthClass, float]:
    quarter = slice(3 * theta.size // 4, None)
    x, y, comp = theta[quarter], log_ratio[quarter], log_comp[quarter]
    finite = np.isfinite(y)
    if finite.sum() < 2:
        return GrowthClass.VANISHING if np.all(y == -np.inf) else GrowthClass.INCONCLUSIVE, float("nan")
    slope = np.polyfit(x[finite], y[finite], 1)[0]
    comp_slope = np.polyfit(x, comp, 1)[0]
    relative = float(slope / comp_slope) if comp_slope > 0 else float(np.sign(slope))
    if relative < -SLOPE_TOL:
        return GrowthClass.VANISHING, relative
    if y[-1] > LOG_RATIO_FLOOR:
        return GrowthClass.BOUNDED_AWAY_FROM_ZERO, relative
    return GrowthClass.INCONCLUSIVE, relative


def growth_condition_check(
    h: Potential,
    mode: GrowthMode,
    *,
    dim: int,
    q: float,
    c: float | None = None,
    profile: CurvatureProfile | None = None,
    lam: float | None = None,
    delta: float = 0.0,
    epsilon: float = 0.5,
    theta_max: float | None = None,
    points: int = GROWTH_POINTS,
) -> GrowthReport:
    """
    Classify the trend of h(θ)/comparator(θ) on a geometric grid.

    The ratio is `vanishing` when its log falls over the last quarter of the grid
    at a rate of at least 1% of the comparator's log growth,
    `bounded_away_from_zero` when it does not fall and stays representable, and
    `inconclusive` otherwise.

    Args:
        h (Potential): Interaction profile.
        mode (str): 'nonexist_const', 'exist_const', 'nonexist_var' or 'exist_var'.
        dim (int): Dimension d.
        q (float): Diffusion exponent in (0, 1).
        c (float): Constant curvature bound (constant modes).
        profile (CurvatureProfile): Curvature bound profile (variable modes).
        lam (float): Growth exponent λ (existence modes).
        delta (float): Shift δ ≥ 0 of the variable nonexistence comparator.
        epsilon (float): Relaxation ε in (0, 1) of the variable nonexistence comparator.
        theta_max (float): Largest sample radius.
        points (int): Number of sample radii.

    Returns:
        GrowthReport: Samples, classification and whether the condition holds.

    Raises:
        ParameterError: If q is outside (0, 1), or λ is at or below the threshold in an existence mode.
        PreconditionError: If the curvature input of the mode is missing or invalid.

    Example:
    !!! example
        ```python
        report = growth_condition_check(
            Potential(kind="exp_rate", lam=3.0, c=1.0), "exist_const", dim=2, q=0.5, c=1.0, lam=3.0
        )
        report.classification  # GrowthClass.BOUNDED_AWAY_FROM_ZERO
        ```
    """
    if not 0 < q < 1:
        raise ParameterError(f"The diffusion exponent q must lie in (0, 1), got {q}.")
    if mode in {"nonexist_const", "exist_const"}:
        if c is None or not c > 0:
            raise PreconditionError(f"Mode '{mode}' needs a positive curvature bound c.")
    elif profile is None:
        raise PreconditionError(f"Mode '{mode}' needs a curvature profile.")
    if mode in {"exist_const", "exist_var"}:
        if lam is None:
            raise ParameterError(f"Mode '{mode}' needs a growth exponent λ.")
        require_above_threshold(lam, dim, q)
    if mode == "nonexist_var" and not (0 < epsilon < 1 and delta >= 0):
        raise PreconditionError(f"Need 0 < ε < 1 and δ ≥ 0, got ε={epsilon}, δ={delta}.")

    if theta_max is None:
        theta_max = GROWTH_THETA_MAX
        if profile is not None:
            theta_max = min(theta_max, profile.radius_limit)
        theta_max = min(theta_max, h.radius_limit)
    theta = np.geomspace(GROWTH_THETA_MIN, theta_max, points)
    log_comp = log_comparator(
        mode, theta, dim=dim, q=q, c=c, profile=profile, lam=lam, delta=delta, epsilon=epsilon
    )
    log_ratio = np.asarray(h.log_evaluate(theta), dtype=float) - log_comp
    classification, relative = _classify(theta, log_ratio, log_comp)
    report = GrowthReport(
        mode=mode,
        classification=classification,
        theta=theta,
        log_ratio=log_ratio,
        relative_slope=relative,
        end_log_ratio=float(log_ratio[-1]),
        threshold=exponent_threshold(dim, q),
        satisfied=classification == EXPECTED[mode],
        theorem=THEOREMS[mode],
    )
    logger.info(
        "Growth condition classified",
        extra={"mode": mode, "classification": classification.value, "kind": h.kind},
    )
    return report


def ratio_limit_2lambda(lam: float, c_m: float, theta_max: float = 50.0) -> RatioLimit:
    """
    exp(√c_m λθ)/(sinh(√c_m θ)/√c_m)^λ at θ = theta_max, against its limit 2^λ c_m^{λ/2}.

    Raises:
        PreconditionError: If λ ≤ 0, c_m ≤ 0 or theta_max ≤ 0.

    Example:
    !!! example
        ```python
        ratio_limit_2lambda(2.0, 1.0).deviation  # < 1e-6
        ```
    """
    if not (lam > 0 and c_m > 0 and theta_max > 0):
        raise PreconditionError(f"Need λ, c_m, θ positive, got {lam}, {c_m}, {theta_max}.")
    log_value = np.sqrt(c_m) * lam * theta_max - lam * log_psi_closed_form(c_m, theta_max)
    value = float(np.exp(log_value))
    limit = float(2.0**lam * c_m ** (lam / 2.0))
    return RatioLimit(value=value, limit=limit, deviation=abs(value - limit), theta=theta_max)
