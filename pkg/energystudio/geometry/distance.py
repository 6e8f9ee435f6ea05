"""
Distances on constant-curvature model spaces in polar coordinates around the pole.

A point is given by its radius r and the angle φ between its direction and
another point's direction; the two points and the pole span a totally geodesic
plane, so every formula is two-dimensional.
"""

import numpy as np

from energystudio.exceptions import PreconditionError

from .psi import log_sinh

_ANGLE_SLACK = 1e-12


def _check(r, s, phi) -> None:
    if np.any(np.asarray(r) < 0) or np.any(np.asarray(s) < 0):
        raise PreconditionError("Radii must be non-negative.")
    phi = np.asarray(phi)
    if np.any(phi < -_ANGLE_SLACK) or np.any(phi > np.pi + _ANGLE_SLACK):
        raise PreconditionError("Angles must lie in [0, π].")


def _hyperbolic(c: float, r, s, phi):
    a = np.sqrt(c)
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    half_angle = np.sin(0.5 * np.clip(phi, 0.0, np.pi))
    # sinh²(d√c/2) = sinh²(√c(r−s)/2) + sinh(√c r)·sinh(√c s)·sin²(φ/2), in log form
    with np.errstate(divide="ignore", invalid="ignore"):
        radial = 2.0 * log_sinh(0.5 * a * np.abs(r - s))
        angular = log_sinh(a * r) + log_sinh(a * s) + 2.0 * np.log(half_angle)
        log_root = 0.5 * np.logaddexp(radial, angular)
        small = np.arcsinh(np.exp(np.minimum(log_root, 20.0)))
    return (2.0 / a) * np.where(log_root > 20.0, log_root + np.log(2.0), small)


def hyperbolic_distance(c: float, r, s, phi):
    """
    Geodesic distance in hyperbolic space of curvature −c.

    Equivalent to (1/√c)·arccosh(cosh(√c r)cosh(√c s) − sinh(√c r)sinh(√c s)cos φ),
    evaluated through the half-angle form, which never produces an arccosh
    argument below 1 and is exactly symmetric in (r, s).

    Args:
        c (float): Curvature magnitude c > 0.
        r (float or np.ndarray): Radius of the first point.
        s (float or np.ndarray): Radius of the second point.
        phi (float or np.ndarray): Angle between the two directions, in [0, π].

    Returns:
        float or np.ndarray: Distances, broadcast over the inputs.

    Raises:
        PreconditionError: If c ≤ 0, a radius is negative or an angle is outside [0, π].

    Example:
    !!! example
        ```python
        hyperbolic_distance(1.0, 1.0, 2.0, np.pi)  # 3.0
        ```
    """
    if not c > 0:
        raise PreconditionError(f"Hyperbolic distance needs c > 0, got {c}.")
    _check(r, s, phi)
    out = _hyperbolic(c, r, s, phi)
    return float(out) if np.ndim(out) == 0 else out


def chordal_lower_bound(r, s, phi):
    """√(r² + s² − 2rs cos φ), a lower bound for the distance on every Cartan–Hadamard manifold."""
    _check(r, s, phi)
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    half_angle = np.sin(0.5 * np.clip(phi, 0.0, np.pi))
    out = np.sqrt((r - s) ** 2 + 4.0 * r * s * half_angle**2)
    return float(out) if np.ndim(out) == 0 else out


def geodesic_distance(c: float, r, s, phi):
    """Distance in the constant-curvature model: chordal when c = 0, hyperbolic otherwise."""
    if c == 0:
        return chordal_lower_bound(r, s, phi)
    return hyperbolic_distance(c, r, s, phi)
