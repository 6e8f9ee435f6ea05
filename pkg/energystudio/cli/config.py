"""
Run configuration of the command-line tool.

A run is described by one INI file. The command's defaults file is read
first, the user file is layered on top, and each section is validated into a
pydantic model before anything is computed. The merged configuration is
written next to the outputs so every run can be replayed.
"""

import configparser
import os
from pathlib import Path
from typing import Any, Literal, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from energystudio.exceptions import ConfigError
from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.psi import DEFAULT_TOL
from energystudio.geometry.schemas import CurvatureProfile
from energystudio.groundstate.schemas import MinimizerOptions
from energystudio.inequalities.campaigns import CampaignConfig
from energystudio.inequalities.schemas import DEFAULT_TOLERANCE
from energystudio.logging_config import get_logger
from energystudio.measures.schemas import Potential

from .defaults import read_defaults

logger = get_logger("cli.config")

Section = TypeVar("Section", bound=BaseModel)

CampaignName = Literal[
    "carlson_levin",
    "carlson_levin_general",
    "convexity",
    "convexity_negative_control",
    "convexity_unnormalized",
    "reversed_hls",
    "sandwich",
]

# A user file replaces these sections instead of updating them key by key.
REPLACED_SECTIONS = {"profile", "lower_profile", "upper_profile", "potential"}


def _split(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class RunSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int = Field(0, ge=0, description="Seed of every random draw of the run.")
    threads: int = Field(1, ge=1, description="Worker threads.")
    q: float | None = Field(None, gt=0, lt=1, description="Diffusion exponent.")


class ManifoldSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    dim: int = Field(2, ge=2, description="Dimension d.")
    mode: Literal["constant", "profile", "bounds"] = Field("constant", description="Curvature description.")
    curvature: float = Field(1.0, ge=0, description="Constant curvature magnitude.")
    theta_max: float = Field(30.0, gt=0, description="Radius range of the warping functions.")
    tolerance: float = Field(DEFAULT_TOL, gt=0, description="Integrator tolerance.")


class PsiSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    theta_max: float = Field(10.0, gt=0, description="Radius to integrate to.")
    tol: float = Field(DEFAULT_TOL, gt=0, description="Integrator tolerance.")
    pivot: float = Field(1.0, gt=0, description="Pivot radius of the sandwich bound.")
    epsilon: float = Field(0.5, gt=0, lt=1, description="Relaxation of the lower bound.")


class ScanSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["spreading", "blowup"] = Field("spreading", description="Scan direction.")
    radii: tuple[float, ...] = Field(..., min_length=1, description="Scanned radii.")
    floor: float = Field(-1e6, description="Threshold of the unbounded verdict.")
    with_energies: bool = Field(False, description="Also evaluate exact energies.")

    @field_validator("radii", mode="before")
    @classmethod
    def split_radii(cls, radii):
        return _split(radii)


class VerifySection(BaseModel):
    model_config = ConfigDict(frozen=True)

    campaign: CampaignName | Literal["all"] = Field("all", description="Campaign to run.")
    cases: int = Field(100, ge=1)
    dims: tuple[int, ...] = Field((2, 3, 4), min_length=1)
    q_min: float = Field(0.2, gt=0, lt=1)
    q_max: float = Field(0.9, gt=0, lt=1)
    lam: float | None = Field(None, gt=0, description="Fixed exponent instead of random draws.")
    lam_width: float = Field(5.0, gt=0)
    c_min: float = Field(0.25, gt=0)
    c_max: float = Field(4.0, gt=0)
    max_points: int = Field(200, ge=1)
    tolerance: float = Field(DEFAULT_TOLERANCE, gt=0)
    convexity_lam: float = Field(3.0, gt=0)
    negative_offset: float = Field(3.0, gt=0)
    profile_count: int = Field(30, ge=1)

    @field_validator("dims", mode="before")
    @classmethod
    def split_dims(cls, dims):
        return _split(dims)

    def campaign_config(self, seed: int, threads: int) -> CampaignConfig:
        """
        Raises:
            ValueError: If the parameter box is inconsistent.
        """
        return CampaignConfig(
            seed=seed,
            cases=self.cases,
            dims=self.dims,
            q_range=(self.q_min, self.q_max),
            lam_width=self.lam_width,
            c_range=(self.c_min, self.c_max),
            max_points=self.max_points,
            tolerance=self.tolerance,
            threads=threads,
            lam=self.lam,
        )


class MinimizeSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    options: dict[str, Any] = Field(default_factory=dict, description="Keys passed to MinimizerOptions.")
    lam: float | None = Field(None, gt=0, description="Exponent of the existence growth condition.")
    c_m: float | None = Field(None, gt=0, description="Curvature scale of the certificate lower bound.")
    certificate: bool = Field(True, description="Assemble the existence certificate.")
    init_file: Path | None = Field(None, description="Initial density table `r,rho`.")

    @classmethod
    def from_section(cls, section: dict[str, str]) -> "MinimizeSection":
        """Split a flat `[minimize]` section into search options and run keys."""
        options = {key: value for key, value in section.items() if key in MinimizerOptions.model_fields}
        rest = {key: value for key, value in section.items() if key not in options}
        return cls(options=options, **rest)

    def minimizer_options(self, threads: int) -> MinimizerOptions:
        """
        Raises:
            ConfigError: If an option is invalid.
        """
        try:
            return MinimizerOptions(**{**self.options, "threads": threads})
        except ValidationError as e:
            raise ConfigError(f"Invalid [minimize] section: {e}") from e


class EnergySection(BaseModel):
    model_config = ConfigDict(frozen=True)

    radius: float = Field(1.0, gt=0, description="Radius of the uniform ball.")
    grid_size: int = Field(2048, ge=16, description="Grid nodes of the uniform ball.")
    kernel_nodes: int = Field(256, ge=16, description="Largest grid of the interaction kernel.")
    init_file: Path | None = Field(None, description="Density table `r,rho` evaluated instead of the ball.")


def parse_section(model: type[Section], section: dict[str, str], name: str) -> Section:
    """
    Validate a flat INI section.

    Raises:
        ConfigError: If a value is missing or invalid.
    """
    try:
        return model(**section)
    except ValidationError as e:
        raise ConfigError(f"Invalid [{name}] section: {e}") from e


def _section(parser: configparser.ConfigParser, name: str) -> dict[str, str]:
    if not parser.has_section(name):
        return {}
    return {key: value for key, value in parser.items(name) if value.strip() != ""}


class RunConfig(BaseModel):
    """
    Merged configuration of one command invocation.

    Attributes:
        command (str): Command name.
        parser (configparser.ConfigParser): Merged defaults and user values.
        run (RunSection): The `[run]` section after command-line overrides.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    command: str
    parser: configparser.ConfigParser
    run: RunSection

    def section(self, name: str) -> dict[str, str]:
        return _section(self.parser, name)

    def has_section(self, name: str) -> bool:
        return self.parser.has_section(name)

    @property
    def q(self) -> float:
        if self.run.q is None:
            raise ConfigError(f"The '{self.command}' command needs 'q' in the [run] section.")
        return self.run.q

    def build_profile(self, name: str = "profile") -> CurvatureProfile:
        """
        Raises:
            ConfigError: If the section is missing or invalid.
        """
        if not self.has_section(name):
            raise ConfigError(f"Missing [{name}] section.")
        try:
            return CurvatureProfile.from_config(self.section(name))
        except (ValidationError, ValueError) as e:
            raise ConfigError(f"Invalid [{name}] section: {e}") from e

    def build_potential(self) -> Potential:
        if not self.has_section("potential"):
            raise ConfigError("Missing [potential] section.")
        try:
            return Potential.from_config(self.section("potential"))
        except (ValidationError, ValueError) as e:
            raise ConfigError(f"Invalid [potential] section: {e}") from e

    def build_manifold(self) -> ModelManifold:
        """
        Build the manifold of the `[manifold]` section.

        Mode `profile` reads `[profile]`; mode `bounds` reads `[lower_profile]`
        (c_m) and `[upper_profile]` (c_M).
        """
        settings = parse_section(ManifoldSection, self.section("manifold"), "manifold")
        common = {"dim": settings.dim, "theta_max": settings.theta_max, "tolerance": settings.tolerance}
        try:
            if settings.mode == "constant":
                return ModelManifold(curvature=settings.curvature, **common)
            if settings.mode == "profile":
                return ModelManifold(profile=self.build_profile("profile"), **common)
            return ModelManifold(
                lower_curvature=self.build_profile("lower_profile"),
                upper_curvature=self.build_profile("upper_profile"),
                **common,
            )
        except ValidationError as e:
            raise ConfigError(f"Invalid [manifold] section: {e}") from e

    def to_ini(self) -> str:
        lines: list[str] = []
        for name in self.parser.sections():
            lines.append(f"[{name}]")
            lines.extend(f"{key} = {value}" for key, value in self.parser.items(name))
            lines.append("")
        return "\n".join(lines)

    def write(self, out_dir: str | Path) -> Path:
        path = Path(out_dir) / "config.ini"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_ini(), encoding="utf-8")
        return path


def load_config(
    command: str, path: str | Path | None = None, seed: int | None = None, threads: int | None = None
) -> RunConfig:
    """
    Merge the command defaults, an optional user file and command-line overrides.

    The thread count comes from the flag, then `ENERGYSTUDIO_THREADS`, then
    the `[run]` section.

    Args:
        command (str): Command name.
        path (str or Path): User configuration file.
        seed (int): Seed override.
        threads (int): Thread override.

    Returns:
        RunConfig: The validated configuration.

    Raises:
        FileNotFoundError: If the configuration file does not exist.
        ConfigError: If the file cannot be parsed or a value is invalid.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(read_defaults(command), source=f"<{command} defaults>")
        if path is not None:
            path = Path(path)
            if not path.is_file():
                raise FileNotFoundError(f"Configuration file not found: {path}")
            user = configparser.ConfigParser(interpolation=None)
            user.read_string(path.read_text(encoding="utf-8"), source=str(path))
            for name in user.sections():
                if name in REPLACED_SECTIONS and parser.has_section(name):
                    parser.remove_section(name)
            parser.read_dict(user)
    except configparser.Error as e:
        raise ConfigError(f"Cannot parse configuration: {e}") from e

    run = _section(parser, "run")
    if seed is not None:
        run["seed"] = str(seed)
    env_threads = os.environ.get("ENERGYSTUDIO_THREADS")
    if threads is not None:
        run["threads"] = str(threads)
    elif env_threads:
        run["threads"] = env_threads
    if not parser.has_section("run"):
        parser.add_section("run")
    for key, value in run.items():
        parser.set("run", key, value)

    config = RunConfig(command=command, parser=parser, run=parse_section(RunSection, run, "run"))
    logger.debug("Loaded run configuration", extra={"command": command, "path": str(path) if path else None})
    return config
