"""
Angular reduction of the interaction double integral for radial densities.

For radial ρ the potential W∗ρ at radius r is ∫ K(r, s) ρ(s) dV(s), where
K(r, s) averages h(d) over the angle φ between the two directions with the
weight sin^{d−2}φ. The substitution u = cos φ turns this weight into the
Gauss–Jacobi weight (1−u²)^{(d−3)/2}, which also absorbs the endpoint
singularity at d = 2.
"""

from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr
from scipy.special import roots_jacobi

from energystudio.exceptions import PreconditionError
from energystudio.geometry.distance import geodesic_distance
from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.volumes import sphere_area
from energystudio.logging_config import get_logger
from energystudio.measures.schemas import Potential
from energystudio.quadrature import interval_rule

logger = get_logger("energy.kernel")

ANGULAR_NODES = 64
KERNEL_CELL_ORDER = 4


@lru_cache(maxsize=32)
def angular_rule(dim: int, nodes: int = ANGULAR_NODES) -> tuple[np.ndarray, np.ndarray]:
    """
    Angles and normalized weights averaging over directions in dimension d.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Angles φₖ in (0, π) and weights summing to 1.
    """
    alpha = 0.5 * (dim - 3)
    u, w = roots_jacobi(nodes, alpha, alpha)
    # sin(φ/2) = √((1−u)/2) keeps small angles accurate
    phi = 2.0 * np.arcsin(np.sqrt(np.clip(0.5 * (1.0 - u), 0.0, 1.0)))
    phi.setflags(write=False)
    weights = w / np.sum(w)
    weights.setflags(write=False)
    return phi, weights


def interaction_kernel(c: float, dim: int, h: Potential, r, s, nodes: int = ANGULAR_NODES):
    """
    K(r, s) = ∫₀^π h(d(r, s, φ)) sin^{d−2}φ dφ / ∫₀^π sin^{d−2}φ dφ.

    Args:
        c (float): Constant curvature magnitude c ≥ 0.
        dim (int): Dimension d ≥ 2.
        h (Potential): Interaction profile.
        r (float or np.ndarray): First radius.
        s (float or np.ndarray): Second radius, broadcast against r.
        nodes (int): Number of Gauss–Jacobi nodes.

    Returns:
        float or np.ndarray: The kernel; equal to h(s) exactly where r = 0 (and h(r) where s = 0).

    Raises:
        PreconditionError: If c < 0 or d < 2.

    Example:
    !!! example
        ```python
        interaction_kernel(1.0, 3, Potential(kind="zero"), 1.0, 2.0)  # 0.0
        ```
    """
    if c < 0 or dim < 2:
        raise PreconditionError(f"Kernel needs c ≥ 0 and d ≥ 2, got c={c}, d={dim}.")
    scalar = np.ndim(r) == 0 and np.ndim(s) == 0
    r, s = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(s, dtype=float))
    phi, weights = angular_rule(dim, nodes)
    total = np.zeros(r.shape)
    with np.errstate(over="ignore", invalid="ignore"):
        for angle, weight in zip(phi, weights):
            total += weight * h(geodesic_distance(c, r, s, angle))
        total = np.where(r == 0, h(s), total)
        total = np.where(s == 0, h(r), total)
    return float(total) if scalar else total


def resample_grid(grid: np.ndarray, max_nodes: int) -> np.ndarray:
    """Evenly thinned subset of a grid keeping both endpoints."""
    grid = np.asarray(grid, dtype=float)
    if grid.size <= max_nodes:
        return grid
    index = np.unique(np.round(np.linspace(0, grid.size - 1, max_nodes)).astype(int))
    return grid[index]


class KernelMatrix(BaseModel):
    """
    Cached linear map ρ ↦ W∗ρ for piecewise-linear radial densities on a fixed grid.

    The density is expanded in hat functions on `r_grid` (the last hat is cut at
    the end of the grid). Each grid cell carries a fixed Gauss–Legendre rule,
    so W∗ρ at the grid nodes is `matrix @ values`. The matrix depends on the
    manifold, the potential and the grid only, so one instance serves a whole
    parameter scan or minimization.

    Attributes:
        manifold (ModelManifold): Constant-curvature model.
        potential (Potential): Interaction profile h.
        r_grid (np.ndarray): Node radii starting at 0.
        angular_nodes (int): Gauss–Jacobi nodes of the angular average.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    manifold: ModelManifold = Field(..., description="Constant-curvature model.")
    potential: Potential = Field(..., description="Interaction profile.")
    r_grid: np.ndarray = Field(..., description="Node radii.")
    angular_nodes: int = Field(ANGULAR_NODES, ge=2, description="Angular quadrature nodes.")

    _basis: np.ndarray = PrivateAttr()
    _weights: np.ndarray = PrivateAttr()
    _matrix: np.ndarray = PrivateAttr()

    def model_post_init(self, __context) -> None:
        c = self.manifold.require_constant("The interaction kernel")
        grid = np.asarray(self.r_grid, dtype=float)
        x, w = interval_rule(grid, order=KERNEL_CELL_ORDER)
        cells, order = x.shape
        s = x.ravel()
        # hat-function values at the quadrature nodes, two per node
        basis = np.zeros((s.size, grid.size))
        left = (x - grid[:-1, None]) / np.diff(grid)[:, None]
        rows = np.arange(s.size)
        columns = np.repeat(np.arange(cells), order)
        basis[rows, columns] = 1.0 - left.ravel()
        basis[rows, columns + 1] = left.ravel()
        with np.errstate(over="ignore"):
            weights = w.ravel() * sphere_area(self.manifold.dim) * self.manifold.volume_element(s)
        kernel = interaction_kernel(
            c, self.manifold.dim, self.potential, grid[:, None], s[None, :], self.angular_nodes
        )
        self._basis = basis
        self._weights = weights
        self._matrix = kernel @ (weights[:, None] * basis)
        logger.debug(
            "Built interaction kernel matrix",
            extra={"nodes": grid.size, "quadrature_nodes": s.size, "kind": self.potential.kind},
        )

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def potential_field(self, values: np.ndarray) -> np.ndarray:
        """W∗ρ at the grid nodes for nodal density values."""
        with np.errstate(invalid="ignore"):
            return self._matrix @ np.asarray(values, dtype=float)

    def interaction_energy(self, values: np.ndarray, field: np.ndarray | None = None) -> float:
        """½∫(W∗ρ)ρ dV, with W∗ρ interpolated linearly between the nodes."""
        values = np.asarray(values, dtype=float)
        field = self.potential_field(values) if field is None else field
        with np.errstate(invalid="ignore", over="ignore"):
            return float(0.5 * np.sum(self._weights * (self._basis @ values) * (self._basis @ field)))

    def mass(self, values: np.ndarray) -> float:
        """Mass of nodal values under the same quadrature as the energy."""
        return self.integral(values)

    def integral(self, values: np.ndarray, power: float = 1.0) -> float:
        """∫ρ^power dV for the piecewise-linear density with the given nodal values."""
        interpolated = np.maximum(self._basis @ np.asarray(values, dtype=float), 0.0)
        with np.errstate(over="ignore", invalid="ignore"):
            return float(np.sum(self._weights * np.power(interpolated, power)))
