from enum import Enum
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class EnergyBreakdown(BaseModel):
    """
    Free energy E = (1/(q−1))∫ρ^q + ½∬h(d(x, y)) dμ dμ, split into its two terms.

    Attributes:
        entropy (float): The diffusion term, non-positive for 0 < q < 1.
        interaction (float): The interaction term.
        total (float): entropy + interaction.
        q (float): Diffusion exponent in (0, 1).
        quadrature_error_estimate (float): Estimated absolute error of the entropy quadrature.
    """

    model_config = ConfigDict(frozen=True)

    entropy: float = Field(..., description="Diffusion term.")
    interaction: float = Field(..., description="Interaction term.")
    total: float = Field(..., description="Sum of the two terms.")
    q: float = Field(..., gt=0, lt=1, description="Diffusion exponent.")
    quadrature_error_estimate: float = Field(0.0, ge=0, description="Entropy quadrature error estimate.")

    @field_validator("entropy")
    @classmethod
    def validate_entropy(cls, entropy):
        if entropy > 0:
            raise ValueError("The 'entropy' key must be non-positive for 0 < q < 1.")
        return entropy

    @model_validator(mode="after")
    def validate_total(self):
        expected = self.entropy + self.interaction
        if np.isfinite(expected):
            scale = max(1.0, abs(self.entropy), abs(self.interaction))
            if abs(self.total - expected) > 1e-12 * scale:
                raise ValueError("The 'total' key must equal entropy + interaction.")
        elif not (np.isnan(expected) or self.total == expected):
            raise ValueError("The 'total' key must equal entropy + interaction.")
        return self

    @classmethod
    def from_terms(cls, entropy: float, interaction: float, q: float, error: float = 0.0) -> "EnergyBreakdown":
        return cls(entropy=entropy, interaction=interaction, total=entropy + interaction, q=q,
                   quadrature_error_estimate=error)


class ScanVerdict(str, Enum):
    UNBOUNDED_BELOW_BLOWUP = "unbounded_below_blowup"
    UNBOUNDED_BELOW_SPREADING = "unbounded_below_spreading"
    BOUNDED_BELOW_INCONCLUSIVE = "bounded_below_inconclusive"


ScanKind = Literal["spreading", "blowup"]


class ScanResult(BaseModel):
    """
    Energies and energy bounds of the uniform-ball family along a radius scan.

    Attributes:
        kind (str): 'spreading' (R increasing) or 'blowup' (R decreasing to 0).
        R_values (np.ndarray): Scanned radii.
        bounds (np.ndarray): Upper bounds −|B_R|^{1−q}/(1−q) + h(2R)/2.
        energies (List[EnergyBreakdown]): Exact energies E[ρ_R], or None where not evaluated.
        verdict (ScanVerdict): Empirical trend classification.
        theorem (str): Name of the result that turns the verdict into a statement, if any.
        floor (float): Threshold the bounds must fall below for an unbounded verdict.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: ScanKind = Field(..., description="Scan direction.")
    R_values: np.ndarray = Field(..., description="Scanned radii.")
    bounds: np.ndarray = Field(..., description="Energy upper bounds.")
    energies: list[EnergyBreakdown | None] = Field(..., description="Exact energies where evaluated.")
    verdict: ScanVerdict = Field(..., description="Trend classification.")
    theorem: str | None = Field(None, description="Result justifying the verdict.")
    floor: float = Field(..., description="Unboundedness floor.")

    @model_validator(mode="after")
    def validate_order(self):
        steps = np.diff(self.R_values)
        if self.kind == "spreading" and np.any(steps <= 0):
            raise ValueError("A spreading scan needs strictly increasing radii.")
        if self.kind == "blowup" and np.any(steps >= 0):
            raise ValueError("A blow-up scan needs strictly decreasing radii.")
        if len(self.energies) != self.R_values.size or self.bounds.shape != self.R_values.shape:
            raise ValueError("Scan columns must have one entry per radius.")
        return self

    def summary(self) -> str:
        line = f"verdict={self.verdict.value}"
        if self.theorem:
            line += f"; justified by {self.theorem}"
        return line

    def to_frame(self) -> pd.DataFrame:
        """Table with columns `R,entropy,interaction,total,bound` (NaN where no exact energy)."""

        def column(name: str) -> list[float]:
            return [getattr(e, name) if e is not None else np.nan for e in self.energies]

        return pd.DataFrame(
            {
                "R": self.R_values,
                "entropy": column("entropy"),
                "interaction": column("interaction"),
                "total": column("total"),
                "bound": self.bounds,
            }
        )


GrowthMode = Literal["nonexist_const", "exist_const", "nonexist_var", "exist_var"]


class GrowthClass(str, Enum):
    VANISHING = "vanishing"
    BOUNDED_AWAY_FROM_ZERO = "bounded_away_from_zero"
    INCONCLUSIVE = "inconclusive"


class GrowthReport(BaseModel):
    """
    Empirical trend of h(θ)/comparator(θ) on a geometric θ-grid.

    The classification describes the sampled range only; it never decides a
    true limit.

    Attributes:
        mode (str): Which growth condition was tested.
        classification (GrowthClass): Trend of the ratio.
        theta (np.ndarray): Sample radii.
        log_ratio (np.ndarray): log h − log comparator at the sample radii.
        relative_slope (float): Slope of the log ratio over the last quarter, relative to the comparator's log slope.
        end_log_ratio (float): Log ratio at the largest radius.
        threshold (float): (d−1)(1−q)/q, the exponent threshold of the existence modes.
        satisfied (bool): Whether the classification is the one the tested condition asks for.
        theorem (str): Result the condition belongs to.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mode: GrowthMode = Field(..., description="Tested growth condition.")
    classification: GrowthClass = Field(..., description="Trend of the ratio.")
    theta: np.ndarray = Field(..., description="Sample radii.")
    log_ratio: np.ndarray = Field(..., description="Log of the ratio.")
    relative_slope: float = Field(..., description="Relative slope over the last quarter.")
    end_log_ratio: float = Field(..., description="Log ratio at the last radius.")
    threshold: float = Field(..., description="Exponent threshold (d−1)(1−q)/q.")
    satisfied: bool = Field(..., description="Whether the condition holds on the sampled range.")
    theorem: str = Field(..., description="Result the condition belongs to.")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"theta": self.theta, "log_ratio": self.log_ratio})


class RatioLimit(BaseModel):
    """exp(√c λθ)/(sinh(√c θ)/√c)^λ at one radius against its limit 2^λ c^{λ/2}."""

    model_config = ConfigDict(frozen=True)

    value: float
    limit: float
    deviation: float
    theta: float
