from pathlib import Path
from typing import Any

import numpy as np
import srsly

from energystudio.energy.growth import THEOREMS
from energystudio.exceptions import PreconditionError
from energystudio.inequalities.tightness import energy_lower_bound_check, tightness_tail_bound
from energystudio.logging_config import get_logger
from energystudio.measures.schemas import Potential

from .schemas import ExistenceCertificate, MinimizerResult

logger = get_logger("groundstate.certificate")

TAIL_RADII = (1.0, 2.0, 5.0, 10.0)


def existence_certificate(
    result: MinimizerResult,
    lam: float,
    c_m: float,
    h: Potential,
    q: float,
    tail_radii=TAIL_RADII,
    gamma1_factor: float = 0.5,
) -> ExistenceCertificate:
    """
    Bundle the consistency checks of a converged ground-state run.

    Args:
        result (MinimizerResult): Converged search result.
        lam (float): Exponent of the existence growth condition.
        c_m (float): Curvature scale of the lower bound, at least the manifold curvature.
        h (Potential): The interaction profile of the run.
        q (float): Diffusion exponent of the run.
        tail_radii (Sequence[float]): Radii of the tail-bound table.
        gamma1_factor (float): Factor of the minorant coefficient γ₁.

    Returns:
        ExistenceCertificate: Lower-bound check, tail table and probe comparison.

    Raises:
        PreconditionError: If the run did not converge.
        GrowthConditionRefusal: If h fails the existence growth check for (λ, c_m).

    Example:
    !!! example
        ```python
        h = Potential(kind="sinh_power", lam=3.0, c=1.0)
        result = minimize_radial(ModelManifold(dim=2, curvature=1.0), 0.5, h)
        existence_certificate(result, 3.0, 1.0, h, 0.5).passed  # True
        ```
    """
    if not result.converged:
        raise PreconditionError(f"A certificate needs a converged run, got status '{result.status}'.")
    rho = result.density
    lower = energy_lower_bound_check(rho, q, h, lam, c_m, gamma1_factor=gamma1_factor)
    tails = [tightness_tail_bound(rho, lam, c_m, float(R)) for R in tail_radii]
    best = result.best_probe
    slack = 1e-9 * max(1.0, abs(result.energy.total))
    certificate = ExistenceCertificate(
        energy=result.energy.total,
        lower_bound=lower,
        tail_bounds=tails,
        best_probe=best,
        below_probes=bool(result.energy.total <= best + slack),
        radial_restriction=result.radial_restriction,
        concentration=result.concentration,
        theorem=THEOREMS["exist_const"],
    )
    logger.info(
        "Existence certificate assembled",
        extra={"passed": certificate.passed, "energy": certificate.energy, "bound": lower.bound},
    )
    return certificate


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [_jsonable(item) for item in value]
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def certificate_to_json(certificate: ExistenceCertificate) -> dict[str, Any]:
    """Plain dictionary with non-finite floats written as strings."""
    data = certificate.model_dump()
    data["passed"] = certificate.passed
    return _jsonable(data)


def write_certificate(certificate: ExistenceCertificate, path: str | Path) -> None:
    srsly.write_json(path, certificate_to_json(certificate))


def read_certificate(path: str | Path) -> dict[str, Any]:
    """
    Raises:
        FileNotFoundError: If the file does not exist.
    """
    if not Path(path).exists():
        raise FileNotFoundError(f"File not found: {path}")
    return srsly.read_json(path)
