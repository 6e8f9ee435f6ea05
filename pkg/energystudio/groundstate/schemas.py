from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from energystudio.energy.schemas import EnergyBreakdown
from energystudio.inequalities.schemas import EnergyLowerBound, TailBound
from energystudio.measures.schemas import RadialDensity

RUN_LOG_COLUMNS = ["iter", "energy", "entropy", "interaction", "foc_residual", "lambda_mult", "damping"]

MinimizerStatus = Literal["converged", "max_iterations", "stalled"]


class MinimizerOptions(BaseModel):
    """
    Settings of the damped fixed-point search.

    Attributes:
        grid_size (int): Nodes of the radial grid.
        r_max (float): Outer radius of the grid.
        init_radius (float): Radius of the uniform ball used when no initial density is given.
        energy_tol (float): Relative change of the energy between accepted steps at convergence.
        foc_tol (float): First-order residual at convergence.
        max_iter (int): Iteration cap.
        damping (float): Initial (and largest) mixing weight of the update.
        backtrack (float): Factor applied to the mixing weight after a rejected step.
        min_damping (float): Mixing weight below which the search stalls.
        multiplier_tol (float): Bisection tolerance of the multiplier, in log scale.
        support_threshold (float): Relative density level below which residuals are ignored.
        angular_nodes (int): Gauss–Jacobi nodes of the interaction kernel.
        probe_count (int): Number of uniform-ball probes (0 disables them).
        probe_min (float): Smallest probe radius.
        probe_max (float): Largest probe radius.
        probe_grid_size (int): Grid nodes of each probe density.
        threads (int): Worker threads for the probes.
    """

    model_config = ConfigDict(frozen=True)

    grid_size: int = Field(400, ge=16, description="Nodes of the radial grid.")
    r_max: float = Field(6.0, gt=0, description="Outer radius of the grid.")
    init_radius: float = Field(1.0, gt=0, description="Radius of the default initial ball.")
    energy_tol: float = Field(1e-10, gt=0, description="Relative energy change at convergence.")
    foc_tol: float = Field(1e-4, gt=0, description="First-order residual at convergence.")
    max_iter: int = Field(500, ge=1, description="Iteration cap.")
    damping: float = Field(0.5, gt=0, le=1, description="Initial mixing weight.")
    backtrack: float = Field(0.5, gt=0, lt=1, description="Mixing weight reduction after a rejected step.")
    min_damping: float = Field(1e-6, gt=0, description="Smallest mixing weight.")
    multiplier_tol: float = Field(1e-10, gt=0, description="Bisection tolerance of the multiplier.")
    support_threshold: float = Field(1e-14, ge=0, description="Effective-support threshold.")
    angular_nodes: int = Field(64, ge=2, description="Angular quadrature nodes.")
    probe_count: int = Field(50, ge=0, description="Number of uniform-ball probes.")
    probe_min: float = Field(1e-2, gt=0, description="Smallest probe radius.")
    probe_max: float = Field(1e2, gt=0, description="Largest probe radius.")
    probe_grid_size: int = Field(96, ge=16, description="Grid nodes of each probe.")
    threads: int = Field(1, ge=1, description="Worker threads for the probes.")

    @model_validator(mode="after")
    def validate_ranges(self):
        if self.min_damping > self.damping:
            raise ValueError("The 'min_damping' key must not exceed 'damping'.")
        if self.probe_count and self.probe_min >= self.probe_max:
            raise ValueError("The 'probe_min' key must be below 'probe_max'.")
        return self

    def probe_radii(self) -> np.ndarray:
        return np.geomspace(self.probe_min, self.probe_max, self.probe_count)


class IterationRecord(BaseModel):
    """One row of the run log."""

    model_config = ConfigDict(frozen=True)

    iter: int
    energy: float
    entropy: float
    interaction: float
    foc_residual: float
    lambda_mult: float
    damping: float


class MinimizerResult(BaseModel):
    """
    Outcome of the ground-state search over radial densities.

    The search only explores radial densities, which is recorded in
    `radial_restriction`.

    Attributes:
        density (RadialDensity): Final density, of unit mass.
        energy (EnergyBreakdown): Its energy.
        foc_residual (float): Sup-norm of the first-order residual on the effective support.
        iterations (int): Iterations performed.
        lagrange_multiplier (float): Multiplier of the mass constraint.
        converged (bool): Whether both stopping criteria were met.
        status (str): 'converged', 'max_iterations' or 'stalled'.
        history (List[IterationRecord]): Run log.
        probe_radii (np.ndarray): Radii of the uniform-ball probes.
        probe_energies (np.ndarray): Their energies (`inf` where not representable).
        concentration (float): Mass in the first grid cell.
        tail_mass (float): Mass in the last grid cell.
        radial_restriction (bool): The search space was restricted to radial densities.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    density: RadialDensity
    energy: EnergyBreakdown
    foc_residual: float
    iterations: int = Field(..., ge=0)
    lagrange_multiplier: float
    converged: bool
    status: MinimizerStatus
    history: list[IterationRecord]
    probe_radii: np.ndarray
    probe_energies: np.ndarray
    concentration: float
    tail_mass: float
    radial_restriction: bool = True

    @model_validator(mode="after")
    def validate_result(self):
        if self.converged and not np.isfinite(self.foc_residual):
            raise ValueError("The 'foc_residual' key must be finite for a converged result.")
        if self.probe_radii.shape != self.probe_energies.shape:
            raise ValueError("Probe radii and energies must have the same length.")
        return self

    @property
    def best_probe(self) -> float:
        return float(np.min(self.probe_energies)) if self.probe_energies.size else float("inf")

    def history_frame(self) -> pd.DataFrame:
        """Run log with columns `iter,energy,entropy,interaction,foc_residual,lambda_mult,damping`."""
        return pd.DataFrame([record.model_dump() for record in self.history], columns=RUN_LOG_COLUMNS)

    def probes_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"R": self.probe_radii, "energy": self.probe_energies})


class GridRefinement(BaseModel):
    """
    The same ground-state search on a grid and on one with twice the nodes.

    Attributes:
        coarse (MinimizerResult): Run on `grid_size` nodes.
        fine (MinimizerResult): Run on `2·grid_size` nodes.
        drift (float): Relative change |E_fine − E_coarse|/|E_coarse| of the energy.
    """

    model_config = ConfigDict(frozen=True)

    coarse: MinimizerResult
    fine: MinimizerResult
    drift: float = Field(..., ge=0, description="Relative energy change under grid doubling.")

    @property
    def converged(self) -> bool:
        return self.coarse.converged and self.fine.converged


class ExistenceCertificate(BaseModel):
    """
    Consistency dossier of a converged ground-state run.

    It bundles numerical checks, not a proof: the affine energy lower bound,
    the moment tail bounds at fixed radii and the comparison with the
    uniform-ball probes.

    Attributes:
        energy (float): Energy of the computed minimizer.
        lower_bound (EnergyLowerBound): Affine lower bound check.
        tail_bounds (List[TailBound]): Tail mass against its moment bound.
        best_probe (float): Lowest probe energy.
        below_probes (bool): The minimizer's energy does not exceed any probe energy.
        radial_restriction (bool): Copied from the run.
        concentration (float): Copied from the run.
        theorem (str): Result guaranteeing existence under the tested growth condition.
    """

    model_config = ConfigDict(frozen=True)

    energy: float
    lower_bound: EnergyLowerBound
    tail_bounds: list[TailBound]
    best_probe: float
    below_probes: bool
    radial_restriction: bool
    concentration: float
    theorem: str

    @property
    def passed(self) -> bool:
        return self.lower_bound.holds and self.below_probes and all(t.holds for t in self.tail_bounds)
