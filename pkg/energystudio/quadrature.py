"""
Composite Gauss–Legendre quadrature shared by every module.

Two flavours are provided:

- `integrate` adapts the number of equal panels on a finite interval, doubling
  until two successive results agree to a relative tolerance. It is used for
  smooth integrands such as √c and ψ^{d-1}.
- `interval_rule` places a fixed-order rule on every cell of a user grid. It is
  used for radial densities, which are piecewise linear between grid nodes.
"""

from collections.abc import Callable
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, Field

from energystudio.logging_config import get_logger

logger = get_logger("quadrature")

PANEL_NODES = 32
RELATIVE_TOL = 1e-10
MAX_PANELS = 4096


class QuadratureResult(BaseModel):
    """
    Result of an adaptive composite rule.

    Attributes:
        value (float): The integral estimate from the finest level.
        error (float): Absolute difference between the last two levels.
        panels (int): Number of panels used at the finest level.
        converged (bool): Whether the relative tolerance was met.
    """

    value: float = Field(..., description="Integral estimate.")
    error: float = Field(..., description="Difference between the last two levels.")
    panels: int = Field(..., description="Panels at the finest level.")
    converged: bool = Field(..., description="Whether the tolerance was met.")


@lru_cache(maxsize=16)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the Gauss–Legendre rule on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _composite(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int, order: int) -> float:
    nodes, weights = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = mid[:, None] + half[:, None] * nodes[None, :]
    values = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return float(np.sum(values * weights[None, :] * half[:, None]))


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rtol: float = RELATIVE_TOL,
    order: int = PANEL_NODES,
    max_panels: int = MAX_PANELS,
) -> QuadratureResult:
    """
    Integrate a vectorized function over [a, b] with panel doubling.

    Args:
        f (Callable): Vectorized integrand.
        a (float): Lower limit.
        b (float): Upper limit.
        rtol (float): Relative agreement required between two successive levels.
        order (int): Gauss–Legendre nodes per panel.
        max_panels (int): Hard cap on the number of panels.

    Returns:
        QuadratureResult: The estimate and its convergence record.

    Example:
    !!! example
        ```python
        result = integrate(np.sin, 0.0, np.pi)
        result.value  # 2.0
        ```
    """
    if b == a:
        return QuadratureResult(value=0.0, error=0.0, panels=0, converged=True)
    if b < a:
        flipped = integrate(f, b, a, rtol=rtol, order=order, max_panels=max_panels)
        return flipped.model_copy(update={"value": -flipped.value})

    panels = 1
    previous = _composite(f, a, b, panels, order)
    while panels < max_panels:
        panels *= 2
        current = _composite(f, a, b, panels, order)
        error = abs(current - previous)
        if not np.isfinite(current):
            return QuadratureResult(value=current, error=np.inf, panels=panels, converged=False)
        if error <= rtol * abs(current) or error == 0.0:
            return QuadratureResult(value=current, error=error, panels=panels, converged=True)
        previous = current

    logger.warning(
        "Composite quadrature hit the panel cap",
        extra={"a": a, "b": b, "panels": panels, "error": error},
    )
    return QuadratureResult(value=current, error=error, panels=panels, converged=False)


def interval_rule(edges: np.ndarray, order: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """
    Place a Gauss–Legendre rule on every cell of a grid.

    Args:
        edges (np.ndarray): Non-decreasing cell boundaries.
        order (int): Nodes per cell.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Nodes and weights, both shaped (cells, order).
            Zero-length cells contribute zero weight.
    """
    edges = np.asarray(edges, dtype=float)
    nodes, weights = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = mid[:, None] + half[:, None] * nodes[None, :]
    w = half[:, None] * weights[None, :]
    return x, w


def cumulative_integral(
    f: Callable[[np.ndarray], np.ndarray], grid: np.ndarray, order: int = PANEL_NODES
) -> np.ndarray:
    """
    Running integral of f from grid[0] to each grid node.

    Each cell is integrated with one fixed-order panel, so the grid should be
    fine enough for f to be smooth on every cell.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2:
        return np.zeros_like(grid)
    x, w = interval_rule(grid, order=order)
    cells = np.sum(np.asarray(f(x.ravel()), dtype=float).reshape(x.shape) * w, axis=1)
    return np.concatenate([[0.0], np.cumsum(cells)])
