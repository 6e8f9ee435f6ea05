"""
Ground-state search over radial probability densities.

On its support a minimizer satisfies the first-order condition

    (q/(q−1))ρ^{q−1} + W∗ρ = λ,

with λ the multiplier of the mass constraint. Solving for ρ gives the map
T(ρ) = [((1−q)/q)(W∗ρ − λ)]^{−1/(1−q)}, where λ < min W∗ρ is fixed by ∫T(ρ) = 1.
The search mixes ρ with T(ρ) and accepts a mixing weight only when the
energy does not increase, halving it otherwise. The entropy is convex, so
T(ρ) − ρ is a descent direction and small enough weights are always accepted.

Radial densities are automatically centred at the pole; non-radial candidates
are never explored.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.optimize import bisect

from energystudio.energy.growth import THEOREMS, growth_condition_check
from energystudio.energy.kernel import KernelMatrix
from energystudio.energy.scans import BLOWUP_AT_ORIGIN
from energystudio.energy.schemas import EnergyBreakdown, GrowthReport
from energystudio.energy.terms import check_exponent, total_energy
from energystudio.exceptions import (
    GrowthConditionRefusal,
    IntegratorFailureError,
    PreconditionError,
)
from energystudio.geometry.manifold import ModelManifold
from energystudio.logging_config import get_logger
from energystudio.measures.moments import first_moment
from energystudio.measures.radial import normalize, radial_grid, radial_integral, uniform_ball
from energystudio.measures.schemas import DiscreteMeasure, Potential, RadialDensity

from .schemas import GridRefinement, IterationRecord, MinimizerOptions, MinimizerResult

logger = get_logger("groundstate.minimizer")

MAX_LOG_DENSITY = 700.0
BRACKET_STEP = 5.0
BRACKET_STEPS = 300


def check_existence_regime(manifold: ModelManifold, q: float, h: Potential, lam: float | None = None) -> GrowthReport:
    """
    Refuse potentials for which no minimizer exists or existence is not established.

    The checks run in order: singularity at the origin, the spreading
    condition under the curvature of the manifold, then the existence growth
    condition with exponent `lam` (defaulting to the potential's own exponent).

    Returns:
        GrowthReport: The passing existence-mode report.

    Raises:
        GrowthConditionRefusal: If any check rules the computation out.
        ParameterError: If q is outside (0, 1) or λ is at or below the threshold.
        PreconditionError: If the manifold is not hyperbolic (c > 0).
    """
    check_exponent(q)
    c = manifold.require_constant("The ground-state search")
    if not c > 0:
        raise PreconditionError(f"The ground-state search needs curvature −c with c > 0, got c={c}.")
    if h.singular_at_origin:
        raise GrowthConditionRefusal(
            f"The potential '{h.kind}' is singular at the origin and drives concentration.", theorem=BLOWUP_AT_ORIGIN
        )
    spreading = growth_condition_check(h, "nonexist_const", dim=manifold.dim, q=q, c=c)
    if spreading.satisfied:
        raise GrowthConditionRefusal(
            f"The potential '{h.kind}' grows too slowly; the energy is unbounded below by spreading.",
            theorem=spreading.theorem,
            report=spreading,
        )
    lam = h.growth_exponent if lam is None else lam
    if lam is None:
        raise GrowthConditionRefusal(
            f"The potential '{h.kind}' has no growth exponent; pass one to test the existence condition.",
            theorem=THEOREMS["exist_const"],
        )
    existence = growth_condition_check(h, "exist_const", dim=manifold.dim, q=q, c=c, lam=lam)
    if not existence.satisfied:
        raise GrowthConditionRefusal(
            f"The potential '{h.kind}' does not grow like exp(√c λθ) with λ={lam} "
            f"(trend: {existence.classification.value}).",
            theorem=existence.theorem,
            report=existence,
        )
    return existence


def _energy(kernel: KernelMatrix, values: np.ndarray, q: float) -> EnergyBreakdown:
    entropy = min(kernel.integral(values, q) / (q - 1.0), 0.0)
    return EnergyBreakdown.from_terms(entropy, kernel.interaction_energy(values), q)


def fixed_point_update(kernel: KernelMatrix, field: np.ndarray, q: float, tol: float = 1e-10) -> tuple[np.ndarray, float]:
    """
    T(ρ) for the potential field W∗ρ at the grid nodes, and its multiplier.

    With t = min W∗ρ − λ the mass of T(ρ) decreases in t, so log t is found by
    bisection on the log of the mass.

    Returns:
        Tuple[np.ndarray, float]: Nodal values of unit mass and the multiplier λ.

    Raises:
        IntegratorFailureError: If the mass constraint cannot be bracketed.
    """
    scale = (1.0 - q) / q
    exponent = -1.0 / (1.0 - q)
    floor = float(np.min(field))
    gap = field - floor

    def values_at(log_t: float) -> np.ndarray:
        log_values = exponent * np.log(scale * (gap + np.exp(log_t)))
        return np.exp(np.minimum(log_values, MAX_LOG_DENSITY))

    def log_mass(log_t: float) -> float:
        with np.errstate(over="ignore"):
            return float(np.log(kernel.mass(values_at(log_t))))

    upper = 0.0
    for _ in range(BRACKET_STEPS):
        if log_mass(upper) < 0:
            break
        upper += BRACKET_STEP
    lower = upper - BRACKET_STEP
    for _ in range(BRACKET_STEPS):
        if log_mass(lower) > 0:
            break
        lower -= BRACKET_STEP
    if not (log_mass(upper) < 0 < log_mass(lower)):
        raise IntegratorFailureError("Could not bracket the multiplier of the mass constraint.")

    log_t = bisect(log_mass, lower, upper, xtol=tol)
    values = values_at(log_t)
    values = values / kernel.mass(values)
    return values, floor - float(np.exp(log_t))


def _residual(values: np.ndarray, field: np.ndarray, lam_mult: float, q: float, threshold: float) -> float:
    support = values >= threshold * np.max(values)
    support &= values > 0
    if not np.any(support):
        return float("inf")
    with np.errstate(over="ignore", divide="ignore"):
        residual = np.abs(field[support] - lam_mult - q / (1.0 - q) * np.power(values[support], q - 1.0))
    return float(np.max(residual) / max(1.0, abs(lam_mult)))


def foc_residual(
    rho: RadialDensity,
    q: float,
    h: Potential,
    lam_mult: float,
    kernel: KernelMatrix | None = None,
    support_threshold: float = 1e-14,
) -> float:
    """
    Sup-norm of (q/(q−1))ρ^{q−1} + W∗ρ − λ on the effective support, over max(1, |λ|).

    Nodes where ρ < `support_threshold`·max ρ are left out.

    Args:
        rho (RadialDensity): Probability density on a constant-curvature manifold.
        q (float): Diffusion exponent in (0, 1).
        h (Potential): Interaction profile.
        lam_mult (float): Multiplier λ.
        kernel (KernelMatrix): Kernel on the grid where the residual is evaluated; the density grid by default.
        support_threshold (float): Relative effective-support level.

    Returns:
        float: The normalized residual.

    Raises:
        PreconditionError: If ρ is not of unit mass.
    """
    check_exponent(q)
    total = radial_integral(rho)
    if abs(total - 1.0) > 1e-6:
        raise PreconditionError(f"The first-order residual needs a probability density, got mass {total}.")
    if kernel is None:
        kernel = KernelMatrix(manifold=rho.manifold, potential=h, r_grid=rho.r_grid)
    values = rho(kernel.r_grid)
    return _residual(values, kernel.potential_field(values), lam_mult, q, support_threshold)


def wasserstein1_to_pole(mu: RadialDensity | DiscreteMeasure) -> float:
    """
    𝒲₁(μ, δ_o) = ∫ r dμ for a probability measure.

    Example:
    !!! example
        ```python
        wasserstein1_to_pole(uniform_ball(ModelManifold(dim=2, curvature=0.0), 1.0))  # 2/3
        ```
    """
    return first_moment(mu)


def probe_energies(
    manifold: ModelManifold, q: float, h: Potential, radii: np.ndarray, grid_size: int = 96, threads: int = 1
) -> np.ndarray:
    """Energies E[ρ_R] of uniform balls; `inf` where the ball or its energy is not representable."""

    def evaluate(R: float) -> float:
        try:
            value = total_energy(uniform_ball(manifold, float(R), grid_size), q, h).total
        except (PreconditionError, ValueError):
            return float("inf")
        return value if np.isfinite(value) else float("inf")

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.array(list(pool.map(evaluate, np.asarray(radii, dtype=float))))


def minimize_radial(
    manifold: ModelManifold,
    q: float,
    h: Potential,
    init: RadialDensity | None = None,
    opts: MinimizerOptions | None = None,
    lam: float | None = None,
) -> MinimizerResult:
    """
    Search for the global minimizer of E among radial probability densities.

    Args:
        manifold (ModelManifold): Hyperbolic space of curvature −c, c > 0.
        q (float): Diffusion exponent in (0, 1).
        h (Potential): Interaction profile in the existence regime.
        init (RadialDensity): Initial density; the uniform ball of radius `opts.init_radius` by default.
        opts (MinimizerOptions): Search settings.
        lam (float): Exponent of the existence growth condition; the potential's own by default.

    Returns:
        MinimizerResult: The final density, its energy and diagnostics. A run that
        hits the iteration cap or stalls is returned with `converged=False`.

    Raises:
        GrowthConditionRefusal: If the potential is outside the existence regime.
        ParameterError: If q or λ are invalid.
        IntegratorFailureError: If the multiplier cannot be found.

    Example:
    !!! example
        ```python
        result = minimize_radial(
            ModelManifold(dim=2, curvature=1.0), 0.5, Potential(kind="sinh_power", lam=3.0, c=1.0)
        )
        result.converged, result.foc_residual  # True, < 1e-4
        ```
    """
    opts = opts or MinimizerOptions()
    check_existence_regime(manifold, q, h, lam)

    grid = radial_grid(opts.r_max, opts.grid_size)
    kernel = KernelMatrix(manifold=manifold, potential=h, r_grid=grid, angular_nodes=opts.angular_nodes)
    init = init if init is not None else uniform_ball(manifold, min(opts.init_radius, opts.r_max))
    values = np.asarray(init(grid), dtype=float)
    initial_mass = kernel.mass(values)
    if not (np.isfinite(initial_mass) and initial_mass > 0):
        raise PreconditionError("The initial density has no mass on the search grid.")
    values = values / initial_mass

    history: list[IterationRecord] = []
    damping = opts.damping
    previous: float | None = None
    status = "max_iterations"
    residual, lam_mult = float("inf"), float("nan")
    iteration = 0
    for iteration in range(opts.max_iter):
        field = kernel.potential_field(values)
        energy = _energy(kernel, values, q)
        target, lam_mult = fixed_point_update(kernel, field, q, opts.multiplier_tol)
        residual = _residual(values, field, lam_mult, q, opts.support_threshold)
        history.append(
            IterationRecord(
                iter=iteration, energy=energy.total, entropy=energy.entropy, interaction=energy.interaction,
                foc_residual=residual, lambda_mult=lam_mult, damping=damping,
            )
        )
        logger.debug(
            "Ground-state iteration",
            extra={"iteration": iteration, "energy": energy.total, "foc_residual": residual, "damping": damping},
        )
        settled = previous is not None and abs(previous - energy.total) <= opts.energy_tol * max(1.0, abs(energy.total))
        if settled and residual <= opts.foc_tol:
            status = "converged"
            break
        previous = energy.total

        alpha = damping
        while True:
            trial = (1.0 - alpha) * values + alpha * target
            if _energy(kernel, trial, q).total <= energy.total:
                break
            alpha *= opts.backtrack
            if alpha < opts.min_damping:
                break
        if alpha < opts.min_damping:
            status = "converged" if residual <= opts.foc_tol else "stalled"
            break
        values = trial
        damping = min(2.0 * alpha, opts.damping)

    density = normalize(RadialDensity(manifold=manifold, r_grid=grid, values=values))
    energy = total_energy(density, q, h, kernel)
    probes = opts.probe_radii()
    probe_values = probe_energies(manifold, q, h, probes, opts.probe_grid_size, opts.threads)
    converged = status == "converged"
    result = MinimizerResult(
        density=density,
        energy=energy,
        foc_residual=residual,
        iterations=iteration + 1,
        lagrange_multiplier=lam_mult,
        converged=converged,
        status=status,
        history=history,
        probe_radii=probes,
        probe_energies=probe_values,
        concentration=radial_integral(density, upper=float(grid[1])),
        tail_mass=radial_integral(density, lower=float(grid[-2])),
    )
    if converged:
        logger.info(
            "Ground-state search converged",
            extra={"iterations": result.iterations, "energy": energy.total, "foc_residual": residual},
        )
    else:
        logger.warning(
            "Ground-state search did not converge",
            extra={"status": status, "iterations": result.iterations, "foc_residual": residual},
        )
    return result


def grid_refinement_drift(
    manifold: ModelManifold,
    q: float,
    h: Potential,
    opts: MinimizerOptions | None = None,
    lam: float | None = None,
) -> GridRefinement:
    """
    Run the search on `opts.grid_size` nodes and again on twice as many.

    The relative energy drift between the two runs estimates the discretization
    error of the computed ground-state energy.

    Raises:
        GrowthConditionRefusal: If the potential is outside the existence regime.
    """
    opts = opts or MinimizerOptions()
    coarse = minimize_radial(manifold, q, h, opts=opts, lam=lam)
    fine = minimize_radial(manifold, q, h, opts=opts.model_copy(update={"grid_size": 2 * opts.grid_size}), lam=lam)
    drift = abs(fine.energy.total - coarse.energy.total) / max(abs(coarse.energy.total), np.finfo(float).tiny)
    logger.info(
        "Grid refinement finished",
        extra={"grid_size": opts.grid_size, "drift": drift, "converged": coarse.converged and fine.converged},
    )
    return GridRefinement(coarse=coarse, fine=fine, drift=drift)
