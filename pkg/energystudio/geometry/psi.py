"""
The comparison ODE ψ″ = c(θ)ψ, ψ(0) = 0, ψ′(0) = 1, and its closed form.

ψ grows like exp(∫√c), so the solver integrates (ψ, ψ′) until ψ reaches
`LOG_SWITCH` and continues with the Riccati pair (log ψ, ψ′/ψ), which stays
finite for every radius the caller can ask for.
"""

import numpy as np
from scipy.integrate import solve_ivp

from energystudio.exceptions import IntegratorFailureError, PreconditionError
from energystudio.logging_config import get_logger

from .schemas import CurvatureProfile, PsiSolution

logger = get_logger("geometry.psi")

LOG_SWITCH = 1e200
DEFAULT_TOL = 1e-10
CHUNK_LENGTH = 1.0
SERIES_CUTOFF = 1e-4


def log_sinh(x):
    """log sinh(x) for x ≥ 0 without overflow; −inf at 0."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        large = x - np.log(2.0) + np.log1p(-np.exp(-2.0 * x))
        small = np.log(np.sinh(np.minimum(x, 20.0)))
    out = np.where(x > 20.0, large, small)
    return float(out) if scalar else out


def psi_closed_form(c: float, theta):
    """
    Closed-form comparison function for constant curvature.

    Args:
        c (float): Curvature magnitude c ≥ 0.
        theta (float or np.ndarray): Radii θ ≥ 0.

    Returns:
        float or np.ndarray: sinh(√c θ)/√c, or θ when c = 0.

    Raises:
        PreconditionError: If c < 0 or a radius is negative.

    Example:
    !!! example
        ```python
        psi_closed_form(1.0, 2.0)  # 3.626860407847019
        psi_closed_form(0.0, 5.0)  # 5.0
        ```
    """
    if not c >= 0:
        raise PreconditionError(f"Curvature magnitude must be non-negative, got {c}.")
    scalar = np.ndim(theta) == 0
    t = np.asarray(theta, dtype=float)
    if np.any(t < 0):
        raise PreconditionError("Radii must be non-negative.")
    if c == 0:
        out = t.copy()
    else:
        a = np.sqrt(c)
        x = a * t
        x2 = x * x
        series = t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0)
        with np.errstate(over="ignore"):
            out = np.where(x < SERIES_CUTOFF, series, np.sinh(x) / a)
    return float(out) if scalar else out


def log_psi_closed_form(c: float, theta):
    """log of `psi_closed_form`, finite for every positive radius."""
    if not c >= 0:
        raise PreconditionError(f"Curvature magnitude must be non-negative, got {c}.")
    scalar = np.ndim(theta) == 0
    t = np.asarray(theta, dtype=float)
    with np.errstate(divide="ignore"):
        log_t = np.log(t)
    if c == 0:
        out = log_t
    else:
        a = np.sqrt(c)
        x = a * t
        x2 = x * x
        out = np.where(
            x < SERIES_CUTOFF,
            log_t + np.log1p(x2 / 6.0 + x2 * x2 / 120.0),
            log_sinh(x) - np.log(a),
        )
    return float(out) if scalar else out


def _step_cap(profile: CurvatureProfile, start: float, stop: float, max_step: float, step_scale: float) -> float:
    peak = float(np.max(profile(np.linspace(start, stop, 17))))
    return min(max_step, step_scale / np.sqrt(peak))


def solve_psi(
    profile: CurvatureProfile,
    theta_max: float,
    tol: float = DEFAULT_TOL,
    max_step: float = 0.02,
    step_scale: float = 0.02,
) -> PsiSolution:
    """
    Solve the comparison ODE on [0, theta_max].

    The integrator is the embedded Runge–Kutta pair DOP853 with relative
    tolerance `tol`. Steps are capped at `step_scale/√c` so the stored grid
    supports accurate cubic Hermite interpolation.

    Args:
        profile (CurvatureProfile): Positive curvature profile c.
        theta_max (float): Radius to integrate to.
        tol (float): Relative local error target per step.
        max_step (float): Absolute cap on the step size.
        step_scale (float): Cap on the step size in units of 1/√c.

    Returns:
        PsiSolution: Grid values of ψ and ψ′ (log form beyond the overflow switch).

    Raises:
        PreconditionError: If theta_max or tol is not positive.
        InvalidProfileError: If the profile is not strictly positive on [0, theta_max].
        IntegratorFailureError: If the step size underflows.

    Example:
    !!! example
        ```python
        profile = CurvatureProfile(kind="constant", value=1.0)
        solution = solve_psi(profile, theta_max=2.0)
        solution.evaluate(1.0)  # ≈ sinh(1) = 1.1752012
        ```
    """
    if not theta_max > 0:
        raise PreconditionError(f"The 'theta_max' must be positive, got {theta_max}.")
    if not tol > 0:
        raise PreconditionError(f"The 'tol' must be positive, got {tol}.")
    profile.ensure_positive(theta_max)
    atol = tol * 1e-4

    def linear_rhs(theta, y):
        return [y[1], profile(theta) * y[0]]

    def riccati_rhs(theta, y):
        return [y[1], profile(theta) - y[1] * y[1]]

    def overflow(theta, y):
        return y[0] - LOG_SWITCH

    overflow.terminal = True
    overflow.direction = 1

    thetas = [np.array([0.0])]
    first, second = [np.array([0.0])], [np.array([1.0])]
    log_first, log_second = [np.array([-np.inf])], [np.array([0.0])]
    start, state, in_log = 0.0, np.array([0.0, 1.0]), False
    switch_index = None
    count = 1

    while start < theta_max:
        stop = min(start + CHUNK_LENGTH, theta_max)
        cap = _step_cap(profile, start, stop, max_step, step_scale)
        try:
            sol = solve_ivp(
                riccati_rhs if in_log else linear_rhs,
                (start, stop),
                state,
                method="DOP853",
                rtol=tol,
                atol=atol,
                max_step=cap,
                first_step=min(cap, 1e-3),
                events=None if in_log else overflow,
            )
        except (ValueError, FloatingPointError) as e:
            raise IntegratorFailureError(f"Comparison ODE solver failed near θ={start:.6g}: {e}") from e
        if sol.status == -1:
            raise IntegratorFailureError(
                f"Comparison ODE solver failed near θ={float(sol.t[-1]):.6g}: {sol.message}"
            )

        thetas.append(sol.t[1:])
        if in_log:
            log_first.append(sol.y[0, 1:])
            log_second.append(np.log(sol.y[1, 1:]) + sol.y[0, 1:])
            with np.errstate(over="ignore"):
                first.append(np.exp(log_first[-1]))
                second.append(np.exp(log_second[-1]))
        else:
            first.append(sol.y[0, 1:])
            second.append(sol.y[1, 1:])
            log_first.append(np.log(sol.y[0, 1:]))
            log_second.append(np.log(sol.y[1, 1:]))
        count += sol.t.size - 1
        start, state = float(sol.t[-1]), sol.y[:, -1].copy()

        if not in_log and sol.status == 1:
            # Event reached: continue with (log ψ, ψ′/ψ) from the switch node.
            switch_index = count - 1
            state = np.array([np.log(state[0]), state[1] / state[0]])
            in_log = True

    theta_grid = np.concatenate(thetas)
    psi, dpsi = np.concatenate(first), np.concatenate(second)
    log_psi, log_dpsi = np.concatenate(log_first), np.concatenate(log_second)

    if switch_index is None:
        switch_index = theta_grid.size - 1

    logger.debug(
        "Solved comparison ODE",
        extra={
            "kind": profile.kind,
            "theta_max": theta_max,
            "nodes": int(theta_grid.size),
            "log_switch": float(theta_grid[switch_index]),
        },
    )
    return PsiSolution(
        theta_grid=theta_grid,
        psi=psi,
        dpsi=dpsi,
        log_psi=log_psi,
        log_dpsi=log_dpsi,
        switch_index=int(switch_index),
        profile=profile,
        tolerance=tol,
    )
