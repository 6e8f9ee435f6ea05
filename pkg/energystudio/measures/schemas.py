from collections.abc import Mapping
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator
from scipy.interpolate import PchipInterpolator

from energystudio.exceptions import InvalidProfileError
from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.psi import log_psi_closed_form
from energystudio.geometry.schemas import _parse_bool, _parse_floats

PotentialKind = Literal[
    "power", "log1p", "exp_rate", "sinh_power", "double_exp", "log", "zero", "tabulated"
]

FLAG_CHECK_RADIUS = 50.0
CENTRING_TOL = 1e-12


class Potential(BaseModel):
    """
    Interaction profile h of the potential W(x, y) = h(d(x, y)).

    Attributes:
        kind (str): Functional family:

            - 'power': h = θ^β/β (β ≠ 0; singular at 0 when β < 0)
            - 'log1p': h = log(1 + θ)
            - 'exp_rate': h = exp(λ√c θ) − 1
            - 'sinh_power': h = (sinh(√c θ)/√c)^λ
            - 'double_exp': h = exp(a·e^{bθ}) − e^a
            - 'log': h = log θ (singular at 0)
            - 'zero': h ≡ 0
            - 'tabulated': monotone cubic interpolation of (θ, h) pairs
        beta (float): Power-law exponent.
        lam (float): Growth exponent λ of 'exp_rate' and 'sinh_power'.
        c (float): Curvature scale of 'exp_rate' and 'sinh_power'.
        a (float): Outer rate of 'double_exp'.
        b (float): Inner rate of 'double_exp'.
        table_theta (Tuple[float]): Tabulated radii, starting at 0.
        table_h (Tuple[float]): Tabulated values.
        nondecreasing (bool): Asserts h is non-decreasing (checked by sampling).
        zero_at_origin (bool): Asserts h(0) = 0 (checked).
    """

    model_config = ConfigDict(frozen=True)

    kind: PotentialKind = Field(..., description="Functional family of h.")
    beta: float | None = Field(None, description="Power-law exponent.")
    lam: float | None = Field(None, description="Growth exponent λ.")
    c: float = Field(1.0, description="Curvature scale.")
    a: float | None = Field(None, description="Outer double-exponential rate.")
    b: float | None = Field(None, description="Inner double-exponential rate.")
    table_theta: tuple[float, ...] | None = Field(None, description="Tabulated radii.")
    table_h: tuple[float, ...] | None = Field(None, description="Tabulated values.")
    nondecreasing: bool = Field(False, description="h is non-decreasing.")
    zero_at_origin: bool = Field(False, description="h(0) = 0.")

    _interpolant: PchipInterpolator | None = PrivateAttr(default=None)

    @model_validator(mode="after")
    def validate_parameters(self):
        if self.kind == "power" and (self.beta is None or self.beta == 0 or not np.isfinite(self.beta)):
            raise ValueError("The 'beta' key must be a finite non-zero float for a power potential.")
        if self.kind in {"exp_rate", "sinh_power"}:
            if self.lam is None or not self.lam > 0:
                raise ValueError(f"The 'lam' key must be positive for a {self.kind} potential.")
            if not self.c > 0:
                raise ValueError(f"The 'c' key must be positive for a {self.kind} potential.")
        if self.kind == "double_exp" and not (
            self.a is not None and self.b is not None and self.a > 0 and self.b > 0
        ):
            raise ValueError("The 'a' and 'b' keys must be positive for a double_exp potential.")
        if self.kind == "tabulated":
            theta, h = self.table_theta, self.table_h
            if theta is None or h is None or len(theta) != len(h) or len(theta) < 2:
                raise ValueError("The 'table_theta' and 'table_h' keys must be lists of equal length (at least 2).")
            if theta[0] != 0.0 or np.any(np.diff(theta) <= 0):
                raise ValueError("The 'table_theta' key must be strictly increasing and start at 0.")
        return self

    def model_post_init(self, __context: Any) -> None:
        if self.kind == "tabulated":
            self._interpolant = PchipInterpolator(
                np.asarray(self.table_theta), np.asarray(self.table_h), extrapolate=False
            )
        if self.nondecreasing:
            start = 1e-6 if self.singular_at_origin else 0.0
            grid = np.linspace(start, min(self.radius_limit, FLAG_CHECK_RADIUS), 1025)
            with np.errstate(over="ignore", invalid="ignore"):
                values = self(grid)
                steps = np.diff(values)
            finite = np.isfinite(steps)
            if np.any(steps[finite] < -1e-12 * np.maximum(1.0, np.abs(values[1:][finite]))):
                raise ValueError("The 'nondecreasing' flag is set but h decreases on the sampled grid.")
        if self.zero_at_origin:
            origin = self(0.0)
            if not (np.isfinite(origin) and abs(origin) <= 1e-14):
                raise ValueError(f"The 'zero_at_origin' flag is set but h(0) = {origin}.")

    @property
    def singular_at_origin(self) -> bool:
        return self.kind == "log" or (self.kind == "power" and self.beta is not None and self.beta < 0)

    @property
    def radius_limit(self) -> float:
        if self.kind == "tabulated":
            return float(self.table_theta[-1])
        return float("inf")

    @property
    def growth_exponent(self) -> float | None:
        """λ for the exponential families, used as the default existence-mode exponent."""
        return self.lam if self.kind in {"exp_rate", "sinh_power"} else None

    def __call__(self, theta):
        """
        Evaluate h(θ), vectorized.

        Raises:
            InvalidProfileError: If a tabulated potential is evaluated outside its table.
        """
        scalar = np.ndim(theta) == 0
        t = np.asarray(theta, dtype=float)
        with np.errstate(over="ignore", divide="ignore"):
            if self.kind == "power":
                out = np.power(t, self.beta) / self.beta
            elif self.kind == "log1p":
                out = np.log1p(t)
            elif self.kind == "exp_rate":
                out = np.expm1(self.lam * np.sqrt(self.c) * t)
            elif self.kind == "sinh_power":
                out = np.exp(self.lam * log_psi_closed_form(self.c, t))
            elif self.kind == "double_exp":
                out = np.exp(self.a) * np.expm1(self.a * np.expm1(self.b * t))
            elif self.kind == "log":
                out = np.log(t)
            elif self.kind == "zero":
                out = np.zeros_like(t)
            else:
                if np.any(t < 0.0) or np.any(t > self.radius_limit):
                    raise InvalidProfileError(
                        f"Tabulated potential evaluated outside its table [0, {self.radius_limit}]."
                    )
                out = self._interpolant(t)
        return float(out) if scalar else out

    def log_evaluate(self, theta):
        """log h(θ) without overflow; −inf where h ≤ 0."""
        scalar = np.ndim(theta) == 0
        t = np.asarray(theta, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            if self.kind == "exp_rate":
                x = self.lam * np.sqrt(self.c) * t
                out = np.where(x > 30.0, x + np.log1p(-np.exp(-x)), np.log(np.expm1(np.minimum(x, 30.0))))
            elif self.kind == "sinh_power":
                out = self.lam * log_psi_closed_form(self.c, t)
            elif self.kind == "double_exp":
                inner = self.a * np.expm1(self.b * t)
                out = self.a + np.where(
                    inner > 30.0, inner + np.log1p(-np.exp(-inner)), np.log(np.expm1(np.minimum(inner, 30.0)))
                )
            else:
                out = np.log(np.maximum(self(t), 0.0))
        return float(out) if scalar else out

    def to_config(self) -> dict[str, str]:
        flat: dict[str, str] = {}
        for key, item in self.model_dump(exclude_none=True).items():
            if isinstance(item, tuple | list):
                flat[key] = ", ".join(repr(float(v)) for v in item)
            elif isinstance(item, bool):
                flat[key] = "true" if item else "false"
            else:
                flat[key] = str(item)
        return flat

    @classmethod
    def from_config(cls, section: Mapping[str, Any]) -> "Potential":
        """
        Build a potential from a flat configuration section.

        Example:
        !!! example
            ```python
            h = Potential.from_config({"kind": "sinh_power", "lam": "3", "c": "1"})
            ```
        """
        parsed: dict[str, Any] = {}
        for key, raw in section.items():
            if key == "kind":
                parsed[key] = str(raw).strip()
            elif key in {"table_theta", "table_h"}:
                parsed[key] = _parse_floats(raw)
            elif key in {"nondecreasing", "zero_at_origin"}:
                parsed[key] = _parse_bool(raw)
            elif key in cls.model_fields:
                parsed[key] = float(raw)
        return cls(**parsed)


class RadialDensity(BaseModel):
    """
    Radial density ρ(r) with respect to the Riemannian volume of a model manifold.

    The density is piecewise linear between grid nodes and vanishes beyond the
    last node, so a non-zero value at the last node is a jump (as for the
    uniform density on a ball).

    Attributes:
        manifold (ModelManifold): Constant-curvature or warped model.
        r_grid (np.ndarray): Strictly increasing radii with r₀ = 0.
        values (np.ndarray): ρ(rᵢ) ≥ 0.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    manifold: ModelManifold = Field(..., description="Host manifold.")
    r_grid: np.ndarray = Field(..., description="Radial grid, starting at 0.")
    values: np.ndarray = Field(..., description="Density values at the grid radii.")

    @field_validator("r_grid", "values", mode="before")
    @classmethod
    def validate_array(cls, array):
        array = np.asarray(array, dtype=float)
        if array.ndim != 1 or not np.all(np.isfinite(array)):
            raise ValueError("Grid and values must be one-dimensional finite arrays.")
        return array

    @model_validator(mode="after")
    def validate_density(self):
        if not self.manifold.is_exact:
            raise ValueError("A radial density needs a constant-curvature or warped manifold.")
        grid = self.r_grid
        if grid.size < 2 or grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
            raise ValueError("The 'r_grid' key must be strictly increasing and start at 0.")
        if self.values.shape != grid.shape:
            raise ValueError("The 'values' key must have the shape of 'r_grid'.")
        if np.any(self.values < 0):
            raise ValueError("The 'values' key must be non-negative.")
        if grid[-1] > self.manifold.radius_limit:
            raise ValueError(
                f"The grid extends to {grid[-1]:.6g}, beyond the manifold's radius limit {self.manifold.radius_limit:.6g}."
            )
        return self

    @property
    def dim(self) -> int:
        return self.manifold.dim

    @property
    def support_radius(self) -> float:
        return float(self.r_grid[-1])

    @property
    def jump_radius(self) -> float | None:
        """Radius of the edge discontinuity, if the density is non-zero at its last node."""
        return self.support_radius if self.values[-1] > 0 else None

    def __call__(self, r):
        """ρ(r) by linear interpolation, zero beyond the grid."""
        scalar = np.ndim(r) == 0
        out = np.interp(r, self.r_grid, self.values, right=0.0)
        at_edge = np.asarray(r) == self.support_radius
        out = np.where(at_edge, self.values[-1], out)
        return float(out) if scalar else out

    def scaled(self, factor: float) -> "RadialDensity":
        return self.model_copy(update={"values": self.values * factor})

    def with_values(self, values: np.ndarray) -> "RadialDensity":
        return RadialDensity(manifold=self.manifold, r_grid=self.r_grid, values=values)


class DiscreteMeasure(BaseModel):
    """
    Finite weighted point cloud on a constant-curvature model, in log coordinates at the pole.

    Attributes:
        dim (int): Dimension d.
        curvature (float): Constant curvature magnitude c ≥ 0.
        log_points (np.ndarray): Tangent vectors vᵢ, shape (n, d); the points are exp_o(vᵢ).
        weights (np.ndarray): Positive weights wᵢ.
        centred (bool): Asserts Σ wᵢ vᵢ = 0 (checked).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int = Field(..., ge=2, description="Dimension d.")
    curvature: float = Field(..., ge=0, description="Constant curvature magnitude.")
    log_points: np.ndarray = Field(..., description="Tangent vectors at the pole.")
    weights: np.ndarray = Field(..., description="Positive weights.")
    centred: bool = Field(False, description="Weighted tangent mean vanishes.")

    @model_validator(mode="after")
    def validate_measure(self):
        points = np.asarray(self.log_points, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.dim or points.shape[0] != weights.shape[0]:
            raise ValueError("The 'log_points' key must have shape (n, dim) matching 'weights'.")
        if points.shape[0] == 0 or not np.all(np.isfinite(points)):
            raise ValueError("The 'log_points' key must hold at least one finite vector.")
        if not np.all(weights > 0) or not np.all(np.isfinite(weights)):
            raise ValueError("The 'weights' key must hold positive finite numbers.")
        if self.centred:
            scale = max(1.0, float(np.sum(weights * np.linalg.norm(points, axis=1))))
            if np.linalg.norm(weights @ points) > CENTRING_TOL * scale:
                raise ValueError("The 'centred' flag is set but the weighted tangent mean is not zero.")
        return self

    @property
    def size(self) -> int:
        return int(self.weights.shape[0])

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.log_points, axis=1)

    def pairwise_angles(self) -> np.ndarray:
        """Angles between the directions of all pairs, accurate for nearly parallel vectors."""
        radii = self.radii
        safe = np.where(radii > 0, radii, 1.0)
        units = self.log_points / safe[:, None]
        gaps = np.linalg.norm(units[:, None, :] - units[None, :, :], axis=2)
        return 2.0 * np.arcsin(np.clip(0.5 * gaps, 0.0, 1.0))

    def scaled(self, factor: float) -> "DiscreteMeasure":
        return self.model_copy(update={"weights": self.weights * factor})
