from collections.abc import Mapping
from typing import Any, Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from energystudio.exceptions import InvalidProfileError, PreconditionError
from energystudio.logging_config import get_logger

logger = get_logger("geometry.schemas")

ProfileKind = Literal["constant", "power", "exponential", "tabulated"]

# Radius range sampled when checking flags of analytic profiles
FLAG_CHECK_RADIUS = 50.0
FLAG_CHECK_SAMPLES = 1025


def _parse_bool(raw: Any) -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in {"1", "true", "yes", "on"}:
        return True
    if text in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"Cannot interpret '{raw}' as a boolean.")


def _parse_floats(raw: Any) -> tuple[float, ...]:
    if isinstance(raw, str):
        return tuple(float(item) for item in raw.replace(";", ",").split(",") if item.strip())
    return tuple(float(item) for item in raw)


class CurvatureProfile(BaseModel):
    """
    Radial curvature bound c(θ) of a model manifold.

    The profile plays the role of c_m (lower sectional curvature bound −c_m)
    or c_M (upper bound −c_M) depending on where it is used.

    Attributes:
        kind (str): One of 'constant', 'power', 'exponential', 'tabulated'.
        value (float): Constant curvature magnitude for kind 'constant'.
        k (float): Exponent of the power law c(θ) = floor + θ^k.
        floor (float): Offset c₀ of the power law.
        beta (float): Rate of the exponential law c(θ) = amplitude·e^{βθ}.
        amplitude (float): Prefactor of the exponential law.
        table_theta (Tuple[float]): Radii of a tabulated profile, starting at 0.
        table_c (Tuple[float]): Curvature values of a tabulated profile.
        monotone_nondecreasing (bool): Asserts c is non-decreasing (checked by sampling).
        satisfies_c32 (bool): Asserts that the upper derivative of c divided by c^{3/2} vanishes at infinity.
    """

    model_config = ConfigDict(frozen=True)

    kind: ProfileKind = Field(..., description="Functional family of the profile.")
    value: float | None = Field(None, description="Constant curvature magnitude.")
    k: float | None = Field(None, description="Power-law exponent.")
    floor: float = Field(0.0, description="Power-law offset c₀.")
    beta: float | None = Field(None, description="Exponential rate.")
    amplitude: float = Field(1.0, description="Exponential prefactor.")
    table_theta: tuple[float, ...] | None = Field(None, description="Tabulated radii.")
    table_c: tuple[float, ...] | None = Field(None, description="Tabulated curvature values.")
    monotone_nondecreasing: bool = Field(False, description="c is non-decreasing.")
    satisfies_c32: bool = Field(False, description="Dc/c^{3/2} tends to zero.")

    _interpolant: PchipInterpolator | None = PrivateAttr(default=None)

    @field_validator("floor")
    @classmethod
    def validate_floor(cls, floor):
        if not np.isfinite(floor) or floor < 0:
            raise ValueError("The 'floor' key must be a finite non-negative float.")
        return floor

    @model_validator(mode="after")
    def validate_parameters(self):
        if self.kind == "constant":
            if self.value is None or not np.isfinite(self.value):
                raise ValueError("The 'value' key must be a finite float for a constant profile.")
        elif self.kind == "power":
            if self.k is None or not self.k > 0:
                raise ValueError("The 'k' key must be a positive float for a power profile.")
        elif self.kind == "exponential":
            if self.beta is None or not self.beta > 0:
                raise ValueError("The 'beta' key must be a positive float for an exponential profile.")
            if not self.amplitude > 0:
                raise ValueError("The 'amplitude' key must be positive for an exponential profile.")
        else:
            theta, c = self.table_theta, self.table_c
            if theta is None or c is None or len(theta) != len(c) or len(theta) < 2:
                raise ValueError(
                    "The 'table_theta' and 'table_c' keys must be lists of equal length (at least 2)."
                )
            if theta[0] != 0.0 or np.any(np.diff(theta) <= 0):
                raise ValueError("The 'table_theta' key must be strictly increasing and start at 0.")
        return self

    def model_post_init(self, __context: Any) -> None:
        if self.kind == "tabulated":
            self._interpolant = PchipInterpolator(
                np.asarray(self.table_theta), np.asarray(self.table_c), extrapolate=False
            )
        if self.monotone_nondecreasing:
            grid = self.sample_grid()
            values = self(grid)
            drops = np.diff(values) < -1e-12 * np.maximum(1.0, np.abs(values[1:]))
            if np.any(drops):
                where = float(grid[1:][drops][0])
                raise ValueError(
                    f"The 'monotone_nondecreasing' flag is set but c decreases near θ={where:.6g}."
                )
        if self.satisfies_c32:
            self._spot_check_c32()

    @property
    def radius_limit(self) -> float:
        """Largest radius where the profile is defined."""
        if self.kind == "tabulated":
            return float(self.table_theta[-1])
        return float("inf")

    def sample_grid(self, count: int = FLAG_CHECK_SAMPLES) -> np.ndarray:
        upper = min(self.radius_limit, FLAG_CHECK_RADIUS)
        return np.linspace(0.0, upper, count)

    def _spot_check_c32(self) -> None:
        upper = min(self.radius_limit, FLAG_CHECK_RADIUS)
        grid = np.geomspace(max(upper / 1e3, 1e-3), upper, 64)
        c = self(grid)
        dc = np.gradient(c, grid)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.abs(dc) / np.power(c, 1.5)
        tail = ratio[len(ratio) // 2 :]
        if not np.all(np.isfinite(tail)) or tail[-1] > 0.1 or tail[-1] > 1.5 * tail[0]:
            logger.warning(
                "satisfies_c32 is asserted but the sampled ratio Dc/c^{3/2} does not decay",
                extra={"kind": self.kind, "ratio_end": float(tail[-1])},
            )

    def __call__(self, theta):
        """
        Evaluate c(θ).

        Args:
            theta (float or np.ndarray): Radii θ ≥ 0.

        Returns:
            float or np.ndarray: Curvature magnitudes, same shape as the input.

        Raises:
            InvalidProfileError: If a tabulated profile is evaluated outside its table.
        """
        scalar = np.ndim(theta) == 0
        t = np.asarray(theta, dtype=float)
        if self.kind == "constant":
            out = np.full_like(t, float(self.value))
        elif self.kind == "power":
            out = self.floor + np.power(np.abs(t), self.k)
        elif self.kind == "exponential":
            with np.errstate(over="ignore"):
                out = self.amplitude * np.exp(self.beta * t)
        else:
            if np.any(t < 0.0) or np.any(t > self.radius_limit):
                raise InvalidProfileError(
                    f"Tabulated profile evaluated outside its table [0, {self.radius_limit}]."
                )
            out = self._interpolant(t)
        return float(out) if scalar else out

    def sqrt(self, theta):
        """Evaluate √c(θ), clipping tiny negative interpolation noise."""
        return np.sqrt(np.maximum(self(theta), 0.0))

    def ensure_positive(self, theta_max: float, samples: int = 2049) -> None:
        """
        Check c > 0 on [0, theta_max] by sampling.

        Raises:
            InvalidProfileError: If a sampled value is not strictly positive.
        """
        grid = np.linspace(0.0, theta_max, samples)
        values = self(grid)
        bad = ~(values > 0.0)
        if np.any(bad):
            where = float(grid[bad][0])
            raise InvalidProfileError(
                f"Curvature profile must be strictly positive; c({where:.6g}) = {float(values[bad][0]):.6g}."
            )

    def to_config(self) -> dict[str, str]:
        """Flat key/value form used in run configuration files."""
        data = self.model_dump(exclude_none=True)
        flat: dict[str, str] = {}
        for key, item in data.items():
            if isinstance(item, tuple | list):
                flat[key] = ", ".join(repr(float(v)) for v in item)
            elif isinstance(item, bool):
                flat[key] = "true" if item else "false"
            else:
                flat[key] = str(item)
        return flat

    @classmethod
    def from_config(cls, section: Mapping[str, Any]) -> "CurvatureProfile":
        """
        Build a profile from a flat configuration section.

        Example:
        !!! example
            ```python
            profile = CurvatureProfile.from_config(
                {"kind": "power", "k": "2", "floor": "1", "monotone_nondecreasing": "true"}
            )
            profile(3.0)  # 10.0
            ```
        """
        parsed: dict[str, Any] = {}
        for key, raw in section.items():
            if key == "kind":
                parsed[key] = str(raw).strip()
            elif key in {"table_theta", "table_c"}:
                parsed[key] = _parse_floats(raw)
            elif key in {"monotone_nondecreasing", "satisfies_c32"}:
                parsed[key] = _parse_bool(raw)
            elif key in cls.model_fields:
                parsed[key] = float(raw)
        return cls(**parsed)


class PsiSolution(BaseModel):
    """
    Numerical solution of ψ″ = c(θ)ψ, ψ(0) = 0, ψ′(0) = 1.

    Values beyond the overflow switch are kept in log form; `psi` and `dpsi`
    hold `inf` there while `log_psi` and `log_dpsi` stay finite.

    Attributes:
        theta_grid (np.ndarray): Strictly increasing radii starting at 0.
        psi (np.ndarray): ψ at the grid radii.
        dpsi (np.ndarray): ψ′ at the grid radii.
        log_psi (np.ndarray): log ψ (−inf at θ = 0).
        log_dpsi (np.ndarray): log ψ′.
        switch_index (int): Index of the first node integrated in log form.
        profile (CurvatureProfile): The profile c.
        tolerance (float): Integrator error target.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    theta_grid: np.ndarray = Field(..., description="Radii, starting at 0.")
    psi: np.ndarray = Field(..., description="ψ values.")
    dpsi: np.ndarray = Field(..., description="ψ′ values.")
    log_psi: np.ndarray = Field(..., description="log ψ values.")
    log_dpsi: np.ndarray = Field(..., description="log ψ′ values.")
    switch_index: int = Field(..., description="First node stored in log form.")
    profile: CurvatureProfile = Field(..., description="The curvature profile used.")
    tolerance: float = Field(..., description="Integrator error target.")

    _linear: CubicHermiteSpline = PrivateAttr()
    _logarithmic: CubicHermiteSpline | None = PrivateAttr(default=None)

    @model_validator(mode="after")
    def validate_solution(self):
        theta = self.theta_grid
        if theta.ndim != 1 or theta.size < 2 or theta[0] != 0.0 or np.any(np.diff(theta) <= 0):
            raise ValueError("The 'theta_grid' key must be strictly increasing and start at 0.")
        for name in ("psi", "dpsi", "log_psi", "log_dpsi"):
            if getattr(self, name).shape != theta.shape:
                raise ValueError(f"The '{name}' key must have the shape of 'theta_grid'.")
        if self.psi[0] != 0.0 or self.dpsi[0] != 1.0:
            raise ValueError("A comparison solution must start with ψ(0)=0 and ψ′(0)=1.")
        slack = max(1e-9, 100.0 * self.tolerance)
        if np.any(self.psi < 0.0) or np.any(self.log_dpsi < np.log1p(-slack)):
            raise ValueError("A comparison solution must satisfy ψ ≥ 0 and ψ′ ≥ 1.")
        if np.any(np.diff(self.log_psi[1:]) <= 0):
            raise ValueError("A comparison solution must be strictly increasing.")
        return self

    def model_post_init(self, __context: Any) -> None:
        s = self.switch_index
        last = min(s, self.theta_grid.size - 1)
        self._linear = CubicHermiteSpline(
            self.theta_grid[: last + 1], self.psi[: last + 1], self.dpsi[: last + 1]
        )
        if s < self.theta_grid.size - 1:
            ratio = np.exp(self.log_dpsi[s:] - self.log_psi[s:])
            self._logarithmic = CubicHermiteSpline(self.theta_grid[s:], self.log_psi[s:], ratio)

    @property
    def theta_max(self) -> float:
        return float(self.theta_grid[-1])

    @property
    def switch_radius(self) -> float:
        if self.switch_index >= self.theta_grid.size - 1:
            return self.theta_max
        return float(self.theta_grid[self.switch_index])

    def _check_range(self, t: np.ndarray) -> None:
        if np.any(t < 0.0) or np.any(t > self.theta_max * (1.0 + 1e-12)):
            raise PreconditionError(
                f"Comparison solution evaluated outside [0, {self.theta_max:.6g}]."
            )

    def log_evaluate(self, theta):
        """
        log ψ(θ) by cubic Hermite interpolation on the stored grid.

        Args:
            theta (float or np.ndarray): Radii inside [0, theta_max].

        Returns:
            float or np.ndarray: log ψ, −inf at θ = 0.
        """
        scalar = np.ndim(theta) == 0
        t = np.atleast_1d(np.asarray(theta, dtype=float))
        self._check_range(t)
        t = np.minimum(t, self.theta_max)
        out = np.empty_like(t)
        inner = t <= self.switch_radius
        with np.errstate(divide="ignore", invalid="ignore"):
            out[inner] = np.log(np.maximum(self._linear(t[inner]), 0.0))
        if self._logarithmic is not None and np.any(~inner):
            out[~inner] = self._logarithmic(t[~inner])
        return float(out[0]) if scalar else out

    def evaluate(self, theta):
        """ψ(θ); `inf` where the value overflows."""
        with np.errstate(over="ignore"):
            return np.exp(self.log_evaluate(theta))

    def log_derivative(self, theta):
        """log ψ′(θ) by Hermite interpolation of ψ′ (or of (log ψ)′ in the log region)."""
        scalar = np.ndim(theta) == 0
        t = np.atleast_1d(np.asarray(theta, dtype=float))
        self._check_range(t)
        t = np.minimum(t, self.theta_max)
        out = np.empty_like(t)
        inner = t <= self.switch_radius
        out[inner] = np.log(self._linear(t[inner], 1))
        if self._logarithmic is not None and np.any(~inner):
            outer = t[~inner]
            out[~inner] = self._logarithmic(outer) + np.log(self._logarithmic(outer, 1))
        return float(out[0]) if scalar else out

    def to_frame(self) -> pd.DataFrame:
        """Export as a table with columns `theta,psi,dpsi`."""
        return pd.DataFrame({"theta": self.theta_grid, "psi": self.psi, "dpsi": self.dpsi})
