from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from energystudio.exceptions import UnsupportedManifoldError
from energystudio.logging_config import get_logger

from .psi import DEFAULT_TOL, log_psi_closed_form, solve_psi
from .schemas import CurvatureProfile, PsiSolution

logger = get_logger("geometry.manifold")

Comparison = Literal["exact", "lower", "upper"]


class ModelManifold(BaseModel):
    """
    Rotationally symmetric Cartan–Hadamard model around a pole.

    Exactly one curvature description is given:

    - `curvature`: constant sectional curvature −c (c = 0 is Euclidean space).
    - `profile`: the model warped by the solution ψ of ψ″ = c(θ)ψ.
    - `lower_curvature` and `upper_curvature`: bound-only mode, the manifold is
      only known to satisfy −c_m(r) ≤ K ≤ −c_M(r) with c_m = `lower_curvature`
      and c_M = `upper_curvature`.

    Attributes:
        dim (int): Dimension d ≥ 2.
        curvature (float): Constant curvature magnitude c ≥ 0.
        profile (CurvatureProfile): Warping profile of a variable-curvature model.
        lower_curvature (CurvatureProfile): c_m in bound-only mode.
        upper_curvature (CurvatureProfile): c_M in bound-only mode.
        theta_max (float): Largest radius where warping functions are solved.
        tolerance (float): Integrator tolerance for the warping functions.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dim: int = Field(..., ge=2, description="Dimension d.")
    curvature: float | None = Field(None, description="Constant curvature magnitude c ≥ 0.")
    profile: CurvatureProfile | None = Field(None, description="Warping profile.")
    lower_curvature: CurvatureProfile | None = Field(None, description="c_m in bound-only mode.")
    upper_curvature: CurvatureProfile | None = Field(None, description="c_M in bound-only mode.")
    theta_max: float = Field(30.0, gt=0, description="Radius range of solved warping functions.")
    tolerance: float = Field(DEFAULT_TOL, gt=0, description="Integrator tolerance.")

    _solutions: dict[str, PsiSolution] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def validate_curvature(self):
        modes = [
            self.curvature is not None,
            self.profile is not None,
            self.lower_curvature is not None or self.upper_curvature is not None,
        ]
        if sum(modes) != 1:
            raise ValueError(
                "Exactly one of 'curvature', 'profile' or the pair 'lower_curvature'/'upper_curvature' must be given."
            )
        if self.curvature is not None and not (np.isfinite(self.curvature) and self.curvature >= 0):
            raise ValueError("The 'curvature' key must be a finite non-negative float.")
        if modes[2]:
            if self.lower_curvature is None or self.upper_curvature is None:
                raise ValueError("Bound-only mode needs both 'lower_curvature' and 'upper_curvature'.")
            grid = np.linspace(0.0, self.theta_max, 1025)
            if np.any(self.upper_curvature(grid) > self.lower_curvature(grid) * (1 + 1e-12)):
                raise ValueError("Bound-only mode needs c_M(θ) ≤ c_m(θ) at every sampled radius.")
        return self

    def model_post_init(self, __context: Any) -> None:
        if self.profile is not None:
            self._solutions["exact"] = solve_psi(self.profile, self.theta_max, self.tolerance)
        elif self.lower_curvature is not None:
            # Volume lower bounds use c_M, upper bounds use c_m.
            self._solutions["lower"] = solve_psi(self.upper_curvature, self.theta_max, self.tolerance)
            self._solutions["upper"] = solve_psi(self.lower_curvature, self.theta_max, self.tolerance)
        logger.debug("Model manifold ready", extra={"mode": self.mode, "dim": self.dim})

    @property
    def mode(self) -> Literal["constant", "profile", "bounds"]:
        if self.curvature is not None:
            return "constant"
        if self.profile is not None:
            return "profile"
        return "bounds"

    @property
    def is_constant(self) -> bool:
        return self.mode == "constant"

    @property
    def is_exact(self) -> bool:
        """Whether volumes and densities are known exactly (not only bounded)."""
        return self.mode != "bounds"

    @property
    def radius_limit(self) -> float:
        return float("inf") if self.is_constant else self.theta_max

    def require_exact(self, operation: str) -> None:
        if not self.is_exact:
            raise UnsupportedManifoldError(f"{operation} needs exact geometry; the manifold is bound-only.")

    def require_constant(self, operation: str) -> float:
        """Return the constant curvature, or raise for variable-curvature manifolds."""
        if not self.is_constant:
            raise UnsupportedManifoldError(
                f"{operation} needs a constant-curvature manifold; got mode '{self.mode}'."
            )
        return float(self.curvature)

    def comparison_solution(self, which: Comparison = "exact") -> PsiSolution | None:
        """Solved warping function, or None for constant curvature."""
        if self.is_constant:
            return None
        if self.mode == "profile":
            return self._solutions["exact"]
        if which == "exact":
            raise UnsupportedManifoldError("A bound-only manifold has no exact warping function.")
        return self._solutions[which]

    def log_warp(self, r, which: Comparison = "exact"):
        """
        log ψ(r) of the warping function.

        In bound-only mode `which` selects ψ_M ('lower', giving volume lower
        bounds) or ψ_m ('upper').
        """
        if self.is_constant:
            return log_psi_closed_form(float(self.curvature), r)
        return self.comparison_solution(which).log_evaluate(r)

    def volume_element(self, r, which: Comparison = "exact"):
        """ψ(r)^{d−1}, the radial factor of the Riemannian volume."""
        with np.errstate(over="ignore"):
            return np.exp((self.dim - 1) * self.log_warp(r, which))
