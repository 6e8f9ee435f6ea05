import numpy as np

from energystudio.exceptions import ParameterError, PreconditionError
from energystudio.geometry.distance import geodesic_distance
from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.volumes import log_ball_volume
from energystudio.logging_config import get_logger
from energystudio.measures.radial import radial_integral, radial_integral_error
from energystudio.measures.schemas import DiscreteMeasure, Potential, RadialDensity

from .kernel import ANGULAR_NODES, KernelMatrix, resample_grid
from .schemas import EnergyBreakdown

logger = get_logger("energy.terms")

KERNEL_GRID_NODES = 256

Measure = RadialDensity | DiscreteMeasure


def check_exponent(q: float) -> None:
    """
    Raises:
        ParameterError: If q is outside (0, 1).
    """
    if not 0 < q < 1:
        raise ParameterError(f"The diffusion exponent q must lie in (0, 1), got {q}.")


def entropy_term(mu: Measure, q: float) -> float:
    """
    The diffusion term (1/(q−1))∫ρ^q dV.

    A discrete measure has no absolutely continuous part, so its term is 0.

    Raises:
        ParameterError: If q is outside (0, 1).

    Example:
    !!! example
        ```python
        rho = uniform_ball(ModelManifold(dim=2, curvature=0.0), 1.0)
        entropy_term(rho, 0.5)  # −2·√π
        ```
    """
    check_exponent(q)
    if isinstance(mu, DiscreteMeasure):
        return 0.0
    return radial_integral(mu, power=q) / (q - 1.0)


def entropy_error(rho: RadialDensity, q: float) -> float:
    """Estimated absolute error of `entropy_term`, from a cell rule of twice the order."""
    return radial_integral_error(rho, power=q) / (1.0 - q)


def pairwise_distances(mu: DiscreteMeasure) -> np.ndarray:
    """Matrix of geodesic distances between the points of a cloud."""
    radii = mu.radii
    return geodesic_distance(mu.curvature, radii[:, None], radii[None, :], mu.pairwise_angles())


def kernel_for(rho: RadialDensity, h: Potential, max_nodes: int = KERNEL_GRID_NODES,
               angular_nodes: int = ANGULAR_NODES) -> KernelMatrix:
    """Kernel matrix on a thinned copy of the density grid."""
    return KernelMatrix(
        manifold=rho.manifold,
        potential=h,
        r_grid=resample_grid(rho.r_grid, max_nodes),
        angular_nodes=angular_nodes,
    )


def interaction_energy(
    mu: Measure, h: Potential, kernel: KernelMatrix | None = None, kernel_nodes: int = KERNEL_GRID_NODES
) -> float:
    """
    The interaction term ½∬h(d(x, y)) dμ(x) dμ(y).

    Radial densities use the angular kernel reduction on the density grid (or
    on the grid of a supplied kernel); clouds use the pairwise sum including the
    diagonal terms h(0). Without a kernel the density grid is thinned to at most
    `kernel_nodes` nodes, keeping both ends.

    Args:
        mu (RadialDensity or DiscreteMeasure): The measure.
        h (Potential): Interaction profile.
        kernel (KernelMatrix): Prebuilt kernel for the same manifold and potential.
        kernel_nodes (int): Largest kernel grid built when no kernel is given.

    Returns:
        float: The term; `inf` on overflow.

    Raises:
        UnsupportedManifoldError: If a radial density lives on a variable-curvature manifold.
        PreconditionError: If the supplied kernel was built for another potential.
    """
    if isinstance(mu, DiscreteMeasure):
        with np.errstate(over="ignore", invalid="ignore"):
            values = h(pairwise_distances(mu))
            energy = 0.5 * float(mu.weights @ values @ mu.weights)
    else:
        if kernel is None:
            kernel = kernel_for(mu, h, kernel_nodes)
        elif kernel.potential.model_dump() != h.model_dump():
            raise PreconditionError("The kernel matrix was built for a different potential.")
        energy = kernel.interaction_energy(mu(kernel.r_grid))
    if not np.isfinite(energy):
        logger.warning("Interaction energy is not finite", extra={"kind": h.kind, "value": energy})
    return energy


def total_energy(
    mu: Measure, q: float, h: Potential, kernel: KernelMatrix | None = None, kernel_nodes: int = KERNEL_GRID_NODES
) -> EnergyBreakdown:
    """
    Both energy terms and their sum.

    The error estimate covers the entropy quadrature; the interaction depends
    on `kernel_nodes` when no kernel is given.

    Raises:
        ParameterError: If q is outside (0, 1).
        UnsupportedManifoldError: If the interaction cannot be evaluated on the manifold.
    """
    entropy = entropy_term(mu, q)
    error = 0.0 if isinstance(mu, DiscreteMeasure) else entropy_error(mu, q)
    interaction = interaction_energy(mu, h, kernel, kernel_nodes)
    return EnergyBreakdown.from_terms(entropy, interaction, q, error)


def rhoR_energy_bound(manifold: ModelManifold, R: float, q: float, h: Potential) -> float:
    """
    Upper bound −|B_R(o)|^{1−q}/(1−q) + h(2R)/2 on the energy of the uniform ball ρ_R.

    In bound-only mode the ball volume is replaced by its lower bound, which
    keeps the value an upper bound.

    Args:
        manifold (ModelManifold): Any model manifold.
        R (float): Ball radius R > 0.
        q (float): Diffusion exponent in (0, 1).
        h (Potential): Interaction profile.

    Returns:
        float: The bound (may be −inf when the volume overflows).

    Raises:
        PreconditionError: If R ≤ 0.
        ParameterError: If q is outside (0, 1).
    """
    check_exponent(q)
    if not R > 0:
        raise PreconditionError(f"Ball radius must be positive, got {R}.")
    log_volume = log_ball_volume(manifold, R).lower
    with np.errstate(over="ignore"):
        entropy = -np.exp((1.0 - q) * log_volume) / (1.0 - q)
        return float(entropy + 0.5 * h(2.0 * R))
