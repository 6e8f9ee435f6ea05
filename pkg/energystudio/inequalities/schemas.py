import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

DEFAULT_TOLERANCE = 1e-6


class CLConstants(BaseModel):
    """
    Constants of the Carlson–Levin type inequality

        ∫ρ^q ≤ C₁ (∫ρ)^{(1−p)q} (∫(sinh(√c_m r)/√c_m)^λ ρ)^{pq}.

    Attributes:
        lam (float): Moment exponent λ.
        q (float): Diffusion exponent.
        c_m (float): Curvature scale.
        dim (int): Dimension d.
        p (float): (d−1)(1−q)/(λq), in (0, 1).
        alpha1 (float): (dω(d)/(√c_m(d−1)))^{1−q}.
        alpha2 (float): (dω(d)(1−q)/(√c_m β₂))^{1−q}.
        beta1 (float): (1−q)(d−1).
        beta2 (float): λq − (1−q)(d−1).
        C1 (float): (α₁^{β₂}α₂^{β₁})^{1/(β₁+β₂)}((β₂/β₁)^{β₁/(β₁+β₂)} + (β₁/β₂)^{β₂/(β₁+β₂)}).
    """

    model_config = ConfigDict(frozen=True)

    lam: float = Field(..., gt=0)
    q: float = Field(..., gt=0, lt=1)
    c_m: float = Field(..., gt=0)
    dim: int = Field(..., ge=2)
    p: float = Field(..., gt=0, lt=1)
    alpha1: float = Field(..., gt=0)
    alpha2: float = Field(..., gt=0)
    beta1: float = Field(..., gt=0)
    beta2: float = Field(..., gt=0)
    C1: float = Field(..., gt=0)

    @model_validator(mode="after")
    def validate_identities(self):
        if abs(self.beta1 + self.beta2 - self.lam * self.q) > 1e-12 * max(1.0, self.lam * self.q):
            raise ValueError("The constants must satisfy β₁ + β₂ = λq.")
        return self


class InequalityReport(BaseModel):
    """
    Outcome of one numerical inequality check lhs ≤ rhs.

    A check whose right-hand side diverges, or whose two sides both vanish, is
    flagged degenerate and counted as passed with ratio 0.

    Attributes:
        lhs (float): Left-hand side.
        rhs (float): Right-hand side.
        ratio (float): lhs/rhs.
        constant_used (float): The inequality constant.
        passed (bool): ratio ≤ 1 + tolerance.
        tolerance (float): Relative tolerance.
        degenerate (bool): Whether the check was vacuous.
        case_id (int): Campaign case number.
        label (str): Which inequality was checked.
    """

    model_config = ConfigDict(frozen=True)

    lhs: float
    rhs: float
    ratio: float
    constant_used: float
    passed: bool
    tolerance: float = DEFAULT_TOLERANCE
    degenerate: bool = False
    case_id: int | None = None
    label: str = ""

    @model_validator(mode="after")
    def validate_verdict(self):
        if self.passed != bool(self.ratio <= 1.0 + self.tolerance):
            raise ValueError("The 'passed' key must agree with ratio ≤ 1 + tolerance.")
        return self

    @classmethod
    def compare(
        cls, lhs: float, rhs: float, constant: float, tolerance: float = DEFAULT_TOLERANCE, **kwargs
    ) -> "InequalityReport":
        """Build a report for lhs ≤ rhs."""
        if rhs == np.inf or (lhs == 0 and rhs == 0):
            return cls(lhs=lhs, rhs=rhs, ratio=0.0, constant_used=constant, passed=True,
                       tolerance=tolerance, degenerate=True, **kwargs)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = float(lhs / rhs) if rhs != 0 else float("inf")
        if np.isnan(ratio):
            ratio = float("inf")
        return cls(lhs=lhs, rhs=rhs, ratio=ratio, constant_used=constant,
                   passed=bool(ratio <= 1.0 + tolerance), tolerance=tolerance, **kwargs)

    @classmethod
    def compare_logs(
        cls, log_lhs: float, log_rhs: float, constant: float, tolerance: float = DEFAULT_TOLERANCE, **kwargs
    ) -> "InequalityReport":
        """Build a report for lhs ≤ rhs from the logs of two positive sides."""
        with np.errstate(over="ignore", invalid="ignore"):
            ratio = float(np.exp(log_lhs - log_rhs))
            lhs, rhs = float(np.exp(log_lhs)), float(np.exp(log_rhs))
        return cls(lhs=lhs, rhs=rhs, ratio=ratio, constant_used=constant,
                   passed=bool(ratio <= 1.0 + tolerance), tolerance=tolerance, **kwargs)


def reports_frame(reports: list[InequalityReport]) -> pd.DataFrame:
    """Table with columns `case_id,lhs,rhs,ratio,passed`."""
    return pd.DataFrame(
        {
            "case_id": [r.case_id if r.case_id is not None else i for i, r in enumerate(reports)],
            "lhs": [r.lhs for r in reports],
            "rhs": [r.rhs for r in reports],
            "ratio": [r.ratio for r in reports],
            "passed": [r.passed for r in reports],
        }
    )


class ReversedHLSReport(BaseModel):
    """
    Euclidean limit of the reversed Hardy–Littlewood–Sobolev type inequality.

    Attributes:
        c_values (np.ndarray): Decreasing curvature scales c_k.
        constants (np.ndarray): C₁(c_k)^{−1/(pq)}.
        differences (np.ndarray): Successive differences of the constants.
        cauchy (bool): Whether the differences shrink monotonically.
        limit_constant (float): Extrapolated constant at c = 0 (clamped at 0).
        euclidean (InequalityReport): The inequality with d(x, y)^λ on ℝ^d.
        finite_c (List[InequalityReport]): The inequality with (sinh(√c_k d)/√c_k)^λ on ℝ^d.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    c_values: np.ndarray
    constants: np.ndarray
    differences: np.ndarray
    cauchy: bool
    limit_constant: float
    euclidean: InequalityReport
    finite_c: list[InequalityReport]

    @property
    def passed(self) -> bool:
        return self.cauchy and self.euclidean.passed and all(r.passed for r in self.finite_c)


class TailBound(BaseModel):
    """μ({r ≥ R}) against the moment bound ∫ψ^λ dμ/ψ(R)^λ."""

    model_config = ConfigDict(frozen=True)

    R: float
    tail_mass: float
    bound: float
    holds: bool


class EnergyLowerBound(BaseModel):
    """
    Affine lower bound E[μ] ≥ C̃₁ + C̃₂·∫r dμ and the ingredients it is built from.

    Attributes:
        energy (float): E[μ].
        bound (float): C̃₁ + C̃₂·∫r dμ.
        holds (bool): energy ≥ bound within tolerance.
        first_moment (float): ∫r dμ.
        gamma1 (float): Coefficient of the minorant h ≥ γ₁ψ^λ + γ₂.
        gamma2 (float): Offset of that minorant (infimum on the sampled grid).
        gamma1_tilde (float): Slope of the minorant ψ^λ ≥ γ̃₁θ + γ̃₂.
        gamma2_tilde (float): Offset of that minorant.
        C2 (float): Minimum of −C₁X^{pq}/(1−q) + γ₁X/4 over X ≥ 0.
        C1_tilde (float): C₂ + γ₂/2 + γ₁γ̃₂/4.
        C2_tilde (float): γ₁γ̃₁/4.
        theta_max (float): End of the grid used for the infima.
        tail_monotone (bool): Whether h − γ₁ψ^λ increases at the end of the grid.
    """

    model_config = ConfigDict(frozen=True)

    energy: float
    bound: float
    holds: bool
    first_moment: float
    gamma1: float
    gamma2: float
    gamma1_tilde: float
    gamma2_tilde: float
    C2: float
    C1_tilde: float
    C2_tilde: float
    theta_max: float
    tail_monotone: bool
