"""
Radial densities: grids, the uniform-ball family, quadrature and normalization.

Radial integrals are evaluated cell by cell with a fixed Gauss–Legendre rule
aligned to the density grid, so the piecewise-linear density is smooth on
every cell and the edge jump of a uniform ball sits on a cell boundary.
Integrands are combined in log form so the volume element ψ^{d−1} never
overflows on its own.
"""

from collections.abc import Callable

import numpy as np

from energystudio.exceptions import PreconditionError, UnsupportedManifoldError
from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.volumes import ball_volume, sphere_area
from energystudio.logging_config import get_logger
from energystudio.quadrature import interval_rule

from .schemas import RadialDensity

logger = get_logger("measures.radial")

DEFAULT_GRID_SIZE = 2048
CELL_ORDER = 4
CHECK_ORDER = 8


def radial_grid(r_max: float, n: int = DEFAULT_GRID_SIZE, geometric_fraction: float = 0.125) -> np.ndarray:
    """
    Radial grid on [0, r_max]: geometric spacing near the origin, uniform beyond r_max/16.

    Args:
        r_max (float): Last grid radius.
        n (int): Number of nodes, including 0 and r_max.
        geometric_fraction (float): Share of nodes placed geometrically.

    Returns:
        np.ndarray: Strictly increasing radii starting at 0.

    Raises:
        PreconditionError: If r_max ≤ 0 or n < 16.
    """
    if not r_max > 0:
        raise PreconditionError(f"The grid radius must be positive, got {r_max}.")
    if n < 16:
        raise PreconditionError(f"A radial grid needs at least 16 nodes, got {n}.")
    geometric = max(int(n * geometric_fraction), 2)
    knee = r_max / 16.0
    head = np.geomspace(1e-6 * r_max, knee, geometric)
    tail = np.linspace(knee, r_max, n - geometric)[1:]
    return np.concatenate([[0.0], head, tail])


def _cells(grid: np.ndarray, lower: float, upper: float | None, order: int):
    upper = float(grid[-1]) if upper is None else min(float(upper), float(grid[-1]))
    lower = max(float(lower), 0.0)
    if upper <= lower:
        return np.empty(0), np.empty(0)
    inner = grid[(grid > lower) & (grid < upper)]
    edges = np.concatenate([[lower], inner, [upper]])
    x, w = interval_rule(edges, order=order)
    return x.ravel(), w.ravel()


def radial_integral(
    rho: RadialDensity,
    log_factor: Callable[[np.ndarray], np.ndarray] | None = None,
    power: float = 1.0,
    lower: float = 0.0,
    upper: float | None = None,
    order: int = CELL_ORDER,
) -> float:
    """
    ∫ ρ(r)^power·exp(log_factor(r)) dV over the shell lower ≤ r ≤ upper.

    Args:
        rho (RadialDensity): The density.
        log_factor (Callable): Log of an extra radial weight, or None.
        power (float): Exponent applied to ρ (positive).
        lower (float): Inner radius of the shell.
        upper (float): Outer radius, defaulting to the end of the grid.
        order (int): Gauss–Legendre nodes per grid cell.

    Returns:
        float: The integral, `inf` if the integrand overflows.
    """
    x, w = _cells(rho.r_grid, lower, upper, order)
    if x.size == 0:
        return 0.0
    values = rho(x)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        log_terms = np.where(values > 0, power * np.log(np.where(values > 0, values, 1.0)), -np.inf)
        log_terms = log_terms + (rho.dim - 1) * rho.manifold.log_warp(x)
        if log_factor is not None:
            log_terms = log_terms + log_factor(x)
        total = sphere_area(rho.dim) * float(np.sum(w * np.exp(log_terms)))
    return total


def radial_integral_error(rho: RadialDensity, **kwargs) -> float:
    """Difference between the default cell rule and a rule of twice its order."""
    coarse = radial_integral(rho, order=CELL_ORDER, **kwargs)
    fine = radial_integral(rho, order=CHECK_ORDER, **kwargs)
    return float(abs(fine - coarse))


def mass(rho: RadialDensity) -> float:
    """
    Total mass d·ω(d)∫ρ(r)ψ(r)^{d−1} dr.

    Example:
    !!! example
        ```python
        mass(uniform_ball(ModelManifold(dim=2, curvature=1.0), 1.0))  # 1.0
        ```
    """
    return radial_integral(rho)


def normalize(rho: RadialDensity) -> RadialDensity:
    """
    Rescale a density to unit mass.

    Raises:
        PreconditionError: If the density has zero or non-finite mass.
    """
    total = mass(rho)
    if not (np.isfinite(total) and total > 0):
        raise PreconditionError(f"Cannot normalize a density of mass {total}.")
    return rho.scaled(1.0 / total)


def uniform_ball(manifold: ModelManifold, R: float, grid_size: int = DEFAULT_GRID_SIZE) -> RadialDensity:
    """
    The uniform probability density ρ_R = 1/|B_R(o)| on the geodesic ball of radius R.

    Args:
        manifold (ModelManifold): Constant-curvature or warped model.
        R (float): Ball radius R > 0.
        grid_size (int): Number of grid nodes on [0, R].

    Returns:
        RadialDensity: Constant on [0, R] with a jump at R.

    Raises:
        UnsupportedManifoldError: If the manifold is bound-only.
        PreconditionError: If R ≤ 0.

    Example:
    !!! example
        ```python
        rho = uniform_ball(ModelManifold(dim=2, curvature=0.0), 1.0)
        rho(0.5)  # 1/π
        ```
    """
    if not manifold.is_exact:
        raise UnsupportedManifoldError("uniform_ball needs exact geometry; the manifold is bound-only.")
    if not R > 0:
        raise PreconditionError(f"Ball radius must be positive, got {R}.")
    volume = ball_volume(manifold, R).lower
    if not (np.isfinite(volume) and volume > 0):
        raise PreconditionError(f"The volume of the ball of radius {R} is not representable ({volume}).")
    grid = radial_grid(R, grid_size)
    return RadialDensity(manifold=manifold, r_grid=grid, values=np.full(grid.shape, 1.0 / volume))


def radial_density_from_function(
    manifold: ModelManifold,
    f: Callable[[np.ndarray], np.ndarray],
    r_max: float,
    n: int = DEFAULT_GRID_SIZE,
    normalized: bool = True,
) -> RadialDensity:
    """Sample a non-negative radial function on `radial_grid(r_max, n)`."""
    grid = radial_grid(r_max, n)
    values = np.maximum(np.asarray(f(grid), dtype=float), 0.0)
    rho = RadialDensity(manifold=manifold, r_grid=grid, values=values)
    return normalize(rho) if normalized else rho


def bump_mixture(
    manifold: ModelManifold,
    centres: np.ndarray,
    widths: np.ndarray,
    amplitudes: np.ndarray,
    r_max: float,
    n: int = DEFAULT_GRID_SIZE,
    normalized: bool = True,
) -> RadialDensity:
    """
    Mixture of Gaussian shells Σ aₖ·exp(−(r−cₖ)²/(2wₖ²)), truncated at r_max.

    Raises:
        PreconditionError: If the parameter arrays differ in length, a width is not positive or an amplitude is negative.
    """
    centres, widths, amplitudes = (np.asarray(a, dtype=float) for a in (centres, widths, amplitudes))
    if not (centres.shape == widths.shape == amplitudes.shape) or centres.ndim != 1:
        raise PreconditionError("Bump centres, widths and amplitudes must be 1-D arrays of equal length.")
    if np.any(widths <= 0) or np.any(amplitudes < 0):
        raise PreconditionError("Bump widths must be positive and amplitudes non-negative.")

    def profile(r):
        r = np.asarray(r)[:, None]
        return np.sum(amplitudes * np.exp(-0.5 * ((r - centres) / widths) ** 2), axis=1)

    return radial_density_from_function(manifold, profile, r_max, n, normalized=normalized)
