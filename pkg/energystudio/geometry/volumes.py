from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from energystudio.exceptions import PreconditionError
from energystudio.quadrature import integrate

from .manifold import Comparison, ModelManifold


class VolumeBounds(NamedTuple):
    lower: float
    upper: float


class JacobianBounds(NamedTuple):
    lower: float
    upper: float


def unit_ball_volume(dim: int) -> float:
    """ω(d) = π^{d/2}/Γ(d/2 + 1), the volume of the Euclidean unit ball."""
    return float(np.exp(0.5 * dim * np.log(np.pi) - gammaln(0.5 * dim + 1.0)))


def sphere_area(dim: int) -> float:
    """d·ω(d), the area of the unit sphere in ℝ^d."""
    return dim * unit_ball_volume(dim)


def _log_volume(manifold: ModelManifold, R: float, which: Comparison) -> float:
    if R == 0:
        return -np.inf
    d = manifold.dim
    shift = (d - 1) * float(manifold.log_warp(R, which))

    def integrand(t):
        with np.errstate(divide="ignore", under="ignore"):
            return np.exp((d - 1) * manifold.log_warp(t, which) - shift)

    integral = integrate(integrand, 0.0, R).value
    return float(np.log(sphere_area(d)) + shift + np.log(integral))


def log_ball_volume(manifold: ModelManifold, R: float) -> VolumeBounds:
    """
    Logarithms of the geodesic-ball volume bounds, safe for radii whose volume overflows.

    Raises:
        PreconditionError: If R < 0.
    """
    if R < 0:
        raise PreconditionError(f"Radius must be non-negative, got {R}.")
    if manifold.is_exact:
        exact = _log_volume(manifold, R, "exact")
        return VolumeBounds(lower=exact, upper=exact)
    return VolumeBounds(lower=_log_volume(manifold, R, "lower"), upper=_log_volume(manifold, R, "upper"))


def ball_volume(manifold: ModelManifold, R: float) -> VolumeBounds:
    """
    Bounds on the volume of the geodesic ball B_R(o).

    Returns d·ω(d)∫₀^R ψ_M^{d−1} and d·ω(d)∫₀^R ψ_m^{d−1}. For constant-curvature
    and warped models both entries equal the exact volume.

    Args:
        manifold (ModelManifold): The manifold.
        R (float): Radius R ≥ 0.

    Returns:
        VolumeBounds: Lower and upper bound (`inf` on overflow).

    Example:
    !!! example
        ```python
        hyperbolic_plane = ModelManifold(dim=2, curvature=1.0)
        ball_volume(hyperbolic_plane, 1.0)  # both 2π(cosh 1 − 1) ≈ 3.4523
        ```
    """
    logs = log_ball_volume(manifold, R)
    with np.errstate(over="ignore"):
        return VolumeBounds(lower=float(np.exp(logs.lower)), upper=float(np.exp(logs.upper)))


def jacobian_bounds(manifold: ModelManifold, r: float) -> JacobianBounds:
    """
    Bounds ((ψ_M(r)/r)^{d−1}, (ψ_m(r)/r)^{d−1}) on the Jacobian of exp_o.

    Returns (1, 1) at r = 0.

    Raises:
        PreconditionError: If r < 0.
    """
    if r < 0:
        raise PreconditionError(f"Radius must be non-negative, got {r}.")
    if r == 0:
        return JacobianBounds(lower=1.0, upper=1.0)
    exponent = manifold.dim - 1
    lower_which: Comparison = "exact" if manifold.is_exact else "lower"
    upper_which: Comparison = "exact" if manifold.is_exact else "upper"
    with np.errstate(over="ignore"):
        lower = np.exp(exponent * (manifold.log_warp(r, lower_which) - np.log(r)))
        upper = np.exp(exponent * (manifold.log_warp(r, upper_which) - np.log(r)))
    return JacobianBounds(lower=float(lower), upper=float(upper))
