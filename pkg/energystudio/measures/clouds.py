import numpy as np

from energystudio.exceptions import PreconditionError
from energystudio.logging_config import get_logger

from .schemas import DiscreteMeasure

logger = get_logger("measures.clouds")


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """Counter-based generator for a seed; every random draw in the package goes through it."""
    return np.random.Generator(np.random.Philox(seed))


def _remove_weighted_mean(vectors: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # Two passes bring the residual mean to rounding level.
    for _ in range(2):
        vectors = vectors - (weights @ vectors) / np.sum(weights)
    return vectors


def make_centred_cloud(
    dim: int,
    c: float,
    n: int,
    seed: int,
    scale: float = 1.0,
    random_weights: bool = False,
    total_mass: float = 1.0,
) -> DiscreteMeasure:
    """
    Random weighted point cloud whose weighted tangent mean at the pole vanishes.

    Tangent vectors are drawn from an isotropic normal distribution, then the
    weighted mean is subtracted, which is exactly the centre-of-mass condition
    ∫ log_o x dμ = 0 in log coordinates.

    Args:
        dim (int): Dimension d ≥ 2.
        c (float): Constant curvature magnitude c ≥ 0.
        n (int): Number of points n ≥ 1.
        seed (int): Seed of the counter-based generator.
        scale (float): Standard deviation of the tangent vectors.
        random_weights (bool): Draw Dirichlet weights instead of equal weights.
        total_mass (float): Sum of the weights.

    Returns:
        DiscreteMeasure: A centred cloud.

    Raises:
        PreconditionError: If n < 1, scale ≤ 0 or total_mass ≤ 0.

    Example:
    !!! example
        ```python
        cloud = make_centred_cloud(dim=2, c=1.0, n=100, seed=7)
        cloud.weights @ cloud.log_points  # ≈ [0, 0]
        ```
    """
    if n < 1:
        raise PreconditionError(f"A cloud needs at least one point, got n={n}.")
    if not scale > 0 or not total_mass > 0:
        raise PreconditionError("Cloud scale and total mass must be positive.")
    rng = make_rng(seed)
    vectors = rng.normal(scale=scale, size=(n, dim))
    if random_weights:
        weights = rng.dirichlet(np.ones(n))
    else:
        weights = np.full(n, 1.0 / n)
    weights = weights * total_mass
    vectors = _remove_weighted_mean(vectors, weights)
    logger.debug("Sampled centred cloud", extra={"dim": dim, "n": n, "seed": seed})
    return DiscreteMeasure(dim=dim, curvature=c, log_points=vectors, weights=weights, centred=True)


def shift_cloud(mu: DiscreteMeasure, offset: np.ndarray) -> DiscreteMeasure:
    """Translate every tangent vector by `offset`; the result is no longer flagged centred."""
    offset = np.asarray(offset, dtype=float)
    if offset.shape != (mu.dim,):
        raise PreconditionError(f"The offset must have shape ({mu.dim},), got {offset.shape}.")
    return DiscreteMeasure(
        dim=mu.dim,
        curvature=mu.curvature,
        log_points=mu.log_points + offset,
        weights=mu.weights,
        centred=False,
    )


def pole_measure(dim: int, c: float, mass: float = 1.0) -> DiscreteMeasure:
    """The Dirac mass at the pole."""
    return DiscreteMeasure(
        dim=dim, curvature=c, log_points=np.zeros((1, dim)), weights=np.array([mass]), centred=True
    )
