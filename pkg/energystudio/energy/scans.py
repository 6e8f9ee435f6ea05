"""
Radius scans over the uniform-ball family ρ_R.

A scan evaluates the energy upper bound of ρ_R along a list of radii and
classifies the trend. The classification is empirical: a finite scan cannot
prove that the energy is unbounded below, so a verdict carries the name of the
result that turns the observed trend into a statement.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from energystudio.exceptions import PreconditionError
from energystudio.geometry.manifold import ModelManifold
from energystudio.logging_config import get_logger
from energystudio.measures.radial import uniform_ball
from energystudio.measures.schemas import Potential

from .growth import THEOREMS
from .schemas import EnergyBreakdown, ScanResult, ScanVerdict
from .terms import check_exponent, rhoR_energy_bound, total_energy

logger = get_logger("energy.scans")

UNBOUNDED_FLOOR = -1e6
SCAN_GRID_SIZE = 512

SPREADING_CONSTANT = THEOREMS["nonexist_const"]
SPREADING_VARIABLE = THEOREMS["nonexist_var"]
BLOWUP_AT_ORIGIN = "nonexistence by concentration for potentials singular at the origin"


def _last_half(values: np.ndarray) -> np.ndarray:
    return values[len(values) // 2 :]


def _log_slopes(theta: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Decrease of h per unit decrease of log θ between consecutive radii."""
    return np.diff(values) / np.diff(np.log(theta))


def _exact_energies(
    manifold: ModelManifold, R_values: np.ndarray, q: float, h: Potential, threads: int
) -> list[EnergyBreakdown | None]:
    def evaluate(R: float) -> EnergyBreakdown:
        return total_energy(uniform_ball(manifold, float(R), SCAN_GRID_SIZE), q, h)

    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        return list(pool.map(evaluate, R_values))


def _prepare(R_list, q: float) -> np.ndarray:
    check_exponent(q)
    R_values = np.asarray(R_list, dtype=float)
    if R_values.ndim != 1 or R_values.size == 0:
        raise PreconditionError("A scan needs a non-empty list of radii.")
    if np.any(R_values <= 0):
        raise PreconditionError("Scan radii must be positive.")
    return R_values


def spreading_scan(
    manifold: ModelManifold,
    q: float,
    h: Potential,
    R_list,
    floor: float = UNBOUNDED_FLOOR,
    with_energies: bool = False,
    threads: int = 1,
) -> ScanResult:
    """
    Scan ρ_R for increasing R and test whether the energy bound drops without limit.

    The verdict is `unbounded_below_spreading` when the bounds decrease strictly
    over the last half of the scan and the last bound lies below `floor`.

    Args:
        manifold (ModelManifold): Any model manifold (bound-only allowed).
        q (float): Diffusion exponent in (0, 1).
        h (Potential): Interaction profile.
        R_list (Sequence[float]): Strictly increasing positive radii.
        floor (float): Threshold for the unbounded verdict.
        with_energies (bool): Also evaluate E[ρ_R] exactly (constant curvature only).
        threads (int): Worker threads for the exact energies.

    Returns:
        ScanResult: Bounds, optional energies and the verdict.

    Raises:
        PreconditionError: If the list is empty, not increasing or has non-positive radii.

    Example:
    !!! example
        ```python
        result = spreading_scan(ModelManifold(dim=2, curvature=1.0), 0.5, Potential(kind="log1p"),
                                np.linspace(10, 100, 10))
        result.verdict  # ScanVerdict.UNBOUNDED_BELOW_SPREADING
        ```
    """
    R_values = _prepare(R_list, q)
    if np.any(np.diff(R_values) <= 0):
        raise PreconditionError("A spreading scan needs strictly increasing radii.")
    bounds = np.array([rhoR_energy_bound(manifold, float(R), q, h) for R in R_values])
    energies = _exact_energies(manifold, R_values, q, h, threads) if with_energies else [None] * R_values.size

    tail = _last_half(bounds)
    decreasing = tail.size >= 2 and bool(np.all(np.diff(tail) < 0))
    unbounded = decreasing and bounds[-1] < floor
    verdict = ScanVerdict.UNBOUNDED_BELOW_SPREADING if unbounded else ScanVerdict.BOUNDED_BELOW_INCONCLUSIVE
    theorem = None
    if unbounded:
        theorem = SPREADING_CONSTANT if manifold.is_constant else SPREADING_VARIABLE
    logger.info(
        "Spreading scan finished",
        extra={"verdict": verdict.value, "last_bound": float(bounds[-1]), "radii": R_values.size},
    )
    return ScanResult(
        kind="spreading", R_values=R_values, bounds=bounds, energies=energies,
        verdict=verdict, theorem=theorem, floor=floor,
    )


def blowup_scan(
    manifold: ModelManifold,
    q: float,
    h: Potential,
    R_list,
    floor: float = UNBOUNDED_FLOOR,
    with_energies: bool = False,
    threads: int = 1,
) -> ScanResult:
    """
    Scan ρ_R for R decreasing to 0 and test whether h(2R) drives the energy to −∞.

    The verdict is `unbounded_below_blowup` when the last bound lies below
    `floor`, or when h diverges to −∞ at the origin, h(2R) keeps falling in
    log R over the last half of the scan (the slope dh/dlog R at the last
    radius is at least half the one at the first) and the entropy term shrinks
    towards 0. Potentials with finite h(0) stay inconclusive whatever the
    spacing of the radii.

    Raises:
        PreconditionError: If the list is empty, not decreasing or has non-positive radii.
    """
    R_values = _prepare(R_list, q)
    if np.any(np.diff(R_values) >= 0):
        raise PreconditionError("A blow-up scan needs strictly decreasing radii.")
    bounds = np.array([rhoR_energy_bound(manifold, float(R), q, h) for R in R_values])
    energies = _exact_energies(manifold, R_values, q, h, threads) if with_energies else [None] * R_values.size

    with np.errstate(invalid="ignore", divide="ignore"):
        interaction = np.asarray(h(2.0 * R_values), dtype=float)
        entropy = bounds - 0.5 * interaction
        origin = h(0.0)
    slopes = _log_slopes(_last_half(2.0 * R_values), _last_half(interaction))
    falling = slopes.size >= 1 and bool(np.all(slopes > 0)) and slopes[-1] >= 0.5 * slopes[0]
    diverging = h.singular_at_origin or not np.isfinite(origin)
    entropy_vanishing = abs(entropy[-1]) < abs(entropy[0])
    unbounded = bool(bounds[-1] < floor) or (diverging and falling and entropy_vanishing)
    verdict = ScanVerdict.UNBOUNDED_BELOW_BLOWUP if unbounded else ScanVerdict.BOUNDED_BELOW_INCONCLUSIVE
    logger.info(
        "Blow-up scan finished",
        extra={"verdict": verdict.value, "last_bound": float(bounds[-1]), "radii": R_values.size},
    )
    return ScanResult(
        kind="blowup", R_values=R_values, bounds=bounds, energies=energies,
        verdict=verdict, theorem=BLOWUP_AT_ORIGIN if unbounded else None, floor=floor,
    )
