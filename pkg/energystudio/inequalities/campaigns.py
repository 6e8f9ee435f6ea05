"""
Seeded fuzz campaigns over the inequality checks.

Every case draws from its own counter-based stream derived from (seed, case
number), so results do not depend on the number of worker threads or the
order in which cases finish.
"""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from energystudio.energy.growth import exponent_threshold, require_above_threshold
from energystudio.geometry.bounds import (
    BoundSide,
    find_theta0,
    psi_lower_bound,
    psi_sandwich,
    psi_upper_bound,
)
from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.psi import solve_psi
from energystudio.geometry.schemas import CurvatureProfile
from energystudio.logging_config import get_logger
from energystudio.measures.clouds import make_centred_cloud, make_rng, shift_cloud
from energystudio.measures.radial import bump_mixture
from energystudio.measures.schemas import Potential, RadialDensity

from .carlson_levin import verify_carlson_levin, verify_carlson_levin_general
from .convexity import verify_convexity, verify_convexity_unnormalized
from .reversed_hls import reversed_hls_check
from .schemas import DEFAULT_TOLERANCE, InequalityReport

logger = get_logger("inequalities.campaigns")

CAMPAIGN_GRID_SIZE = 256


class CampaignConfig(BaseModel):
    """
    Parameter box of a fuzz campaign.

    Attributes:
        seed (int): Campaign seed.
        cases (int): Number of cases.
        dims (Tuple[int]): Dimensions to draw from.
        q_range (Tuple[float, float]): Range of the diffusion exponent.
        lam_width (float): λ is drawn from (threshold, threshold + lam_width].
        c_range (Tuple[float, float]): Range of the constant curvature.
        max_points (int): Largest cloud size.
        tolerance (float): Relative tolerance of every check.
        threads (int): Worker threads.
        lam (float): Fixed exponent λ instead of a random draw above the threshold.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(0, ge=0)
    cases: int = Field(100, ge=1)
    dims: tuple[int, ...] = Field((2, 3, 4))
    q_range: tuple[float, float] = Field((0.2, 0.9))
    lam_width: float = Field(5.0, gt=0)
    c_range: tuple[float, float] = Field((0.25, 4.0))
    max_points: int = Field(1000, ge=1)
    tolerance: float = Field(DEFAULT_TOLERANCE, gt=0)
    threads: int = Field(1, ge=1)
    lam: float | None = Field(None, gt=0)

    @model_validator(mode="after")
    def validate_ranges(self):
        if not 0 < self.q_range[0] <= self.q_range[1] < 1:
            raise ValueError("The 'q_range' key must be an ordered pair inside (0, 1).")
        if not 0 < self.c_range[0] <= self.c_range[1]:
            raise ValueError("The 'c_range' key must be an ordered pair of positive floats.")
        if not self.dims or min(self.dims) < 2:
            raise ValueError("The 'dims' key must list dimensions d ≥ 2.")
        return self

    def require_valid_exponent(self) -> None:
        """
        Raises:
            ParameterError: If the fixed λ does not exceed the threshold for every (d, q) in the box.
        """
        if self.lam is not None:
            require_above_threshold(self.lam, max(self.dims), self.q_range[0])


def case_rng(seed: int, case_id: int, stream: int = 0) -> np.random.Generator:
    return make_rng(np.random.SeedSequence([seed, case_id, stream]))


def _run(config: CampaignConfig, case: Callable[[int], list[InequalityReport]], name: str) -> list[InequalityReport]:
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        batches = list(pool.map(case, range(config.cases)))
    reports = [report for batch in batches for report in batch]
    failures = sum(not r.passed for r in reports)
    logger.info("Campaign finished", extra={"campaign": name, "checks": len(reports), "failures": failures})
    return reports


def random_parameters(rng: np.random.Generator, config: CampaignConfig, dim: int) -> tuple[float, float]:
    """Draw (q, λ) with λ in (threshold, threshold + lam_width], or the fixed λ of the config."""
    q = float(rng.uniform(*config.q_range))
    lam = exponent_threshold(dim, q) + config.lam_width * (1.0 - rng.uniform())
    return q, lam if config.lam is None else config.lam


def random_density(rng: np.random.Generator, manifold: ModelManifold, r_max: float) -> RadialDensity:
    """Mixture of one to four Gaussian shells with a random total mass."""
    count = int(rng.integers(1, 5))
    rho = bump_mixture(
        manifold,
        centres=rng.uniform(0.0, 0.8 * r_max, count),
        widths=rng.uniform(0.05, 0.5, count) * r_max,
        amplitudes=rng.uniform(0.1, 1.0, count),
        r_max=r_max,
        n=CAMPAIGN_GRID_SIZE,
    )
    return rho.scaled(float(rng.uniform(0.2, 5.0)))


def carlson_levin_campaign(config: CampaignConfig) -> list[InequalityReport]:
    """Constant-curvature inequality on random densities over hyperbolic spaces."""
    config.require_valid_exponent()

    def case(case_id: int) -> list[InequalityReport]:
        rng = case_rng(config.seed, case_id)
        dim = int(rng.choice(config.dims))
        c = float(rng.uniform(*config.c_range))
        q, lam = random_parameters(rng, config, dim)
        rho = random_density(rng, ModelManifold(dim=dim, curvature=c), float(rng.uniform(0.5, 6.0)))
        return [verify_carlson_levin(rho, lam, q, tolerance=config.tolerance, case_id=case_id)]

    return _run(config, case, "carlson_levin")


def default_variable_profiles() -> list[CurvatureProfile]:
    return [
        CurvatureProfile(kind="power", k=2.0, floor=1.0, monotone_nondecreasing=True),
        CurvatureProfile(kind="exponential", beta=0.5, amplitude=1.0, monotone_nondecreasing=True),
    ]


def general_carlson_levin_campaign(
    config: CampaignConfig, profiles: Sequence[CurvatureProfile] | None = None, theta_max: float = 8.0
) -> list[InequalityReport]:
    """Variable-curvature inequality on densities over models warped by each profile."""
    config.require_valid_exponent()
    profiles = list(profiles) if profiles is not None else default_variable_profiles()
    manifolds = {
        (i, dim): ModelManifold(dim=dim, profile=profile, theta_max=theta_max)
        for i, profile in enumerate(profiles)
        for dim in config.dims
    }

    def case(case_id: int) -> list[InequalityReport]:
        rng = case_rng(config.seed, case_id)
        index = int(rng.integers(len(profiles)))
        dim = int(rng.choice(config.dims))
        manifold = manifolds[(index, dim)]
        q, lam = random_parameters(rng, config, dim)
        rho = random_density(rng, manifold, float(rng.uniform(0.5, 4.0)))
        psi = manifold.comparison_solution("exact")
        return [verify_carlson_levin_general(rho, lam, q, psi, tolerance=config.tolerance, case_id=case_id)]

    return _run(config, case, "carlson_levin_general")


def convexity_campaign(
    config: CampaignConfig, lam: float | None = None, negative_offset: float | None = None, unnormalized: bool = False
) -> list[InequalityReport]:
    """
    Convexity inequality on random centred clouds with H = (sinh(√c θ)/√c)^λ.

    With `negative_offset` every cloud is translated by that distance in a
    random direction and checked without the centring requirement; such a
    campaign is expected to fail.
    """
    lam = lam if lam is not None else (config.lam or 3.0)

    def case(case_id: int) -> list[InequalityReport]:
        rng = case_rng(config.seed, case_id)
        dim = int(rng.choice(config.dims))
        c = float(rng.uniform(*config.c_range))
        n = int(rng.integers(1, config.max_points + 1))
        mass = float(rng.uniform(0.5, 3.0)) if unnormalized else 1.0
        cloud = make_centred_cloud(
            dim, c, n, seed=int(rng.integers(2**31)), scale=float(rng.uniform(0.1, 1.5)),
            random_weights=bool(rng.integers(2)), total_mass=mass,
        )
        H = Potential(kind="sinh_power", lam=lam, c=c)
        check = verify_convexity_unnormalized if unnormalized else verify_convexity
        if negative_offset is None:
            return [check(cloud, H, tolerance=config.tolerance, case_id=case_id)]
        direction = rng.normal(size=dim)
        offset = negative_offset * direction / np.linalg.norm(direction)
        return [check(shift_cloud(cloud, offset), H, tolerance=config.tolerance,
                      require_centred=False, case_id=case_id)]

    name = "convexity_negative_control" if negative_offset is not None else "convexity"
    return _run(config, case, name)


def reversed_hls_campaign(config: CampaignConfig) -> list[InequalityReport]:
    """Euclidean and finite-c reversed HLS checks on random densities in ℝ^d."""
    config.require_valid_exponent()

    def case(case_id: int) -> list[InequalityReport]:
        rng = case_rng(config.seed, case_id)
        dim = int(rng.choice(config.dims))
        q, lam = random_parameters(rng, config, dim)
        rho = random_density(rng, ModelManifold(dim=dim, curvature=0.0), float(rng.uniform(0.5, 3.0)))
        report = reversed_hls_check(rho, lam, q, tolerance=config.tolerance, case_id=case_id)
        if not report.cauchy:
            logger.warning("Constant sequence is not contracting", extra={"case_id": case_id, "dim": dim})
        return [report.euclidean, *report.finite_c]

    return _run(config, case, "reversed_hls")


def random_profile(rng: np.random.Generator) -> CurvatureProfile:
    """A random non-decreasing constant, power-law or exponential profile."""
    kind = str(rng.choice(["constant", "power", "exponential"]))
    if kind == "constant":
        return CurvatureProfile(kind="constant", value=float(rng.uniform(0.25, 4.0)),
                                monotone_nondecreasing=True, satisfies_c32=True)
    if kind == "power":
        return CurvatureProfile(kind="power", k=float(rng.uniform(0.5, 3.0)), floor=float(rng.uniform(0.1, 2.0)),
                                monotone_nondecreasing=True, satisfies_c32=True)
    return CurvatureProfile(kind="exponential", beta=float(rng.uniform(0.1, 1.0)),
                            amplitude=float(rng.uniform(0.25, 2.0)), monotone_nondecreasing=True, satisfies_c32=True)


def sandwich_campaign(config: CampaignConfig, profile_count: int = 30, theta_max: float = 8.0,
                      epsilon: float = 0.5) -> list[InequalityReport]:
    """
    Upper, pivot and relaxed lower bounds of ψ at random (profile, R, θ) triples.

    Profiles are drawn once from the campaign seed and solved once each; the
    cases then sample radii against the cached solutions.
    """
    profile_rng = case_rng(config.seed, 0, stream=1)
    profiles = [random_profile(profile_rng) for _ in range(profile_count)]
    solutions = [solve_psi(profile, theta_max) for profile in profiles]
    anchors = [
        find_theta0(profile, epsilon, solution) if profile.satisfies_c32 else None
        for profile, solution in zip(profiles, solutions)
    ]

    def case(case_id: int) -> list[InequalityReport]:
        rng = case_rng(config.seed, case_id)
        index = int(rng.integers(profile_count))
        profile, psi, theta0 = profiles[index], solutions[index], anchors[index]
        R, theta = (float(x) for x in rng.uniform(1e-3, theta_max, 2))
        slack = max(config.tolerance, 100.0 * psi.tolerance)
        log_psi = float(psi.log_evaluate(theta))
        reports = [
            InequalityReport.compare_logs(log_psi, float(np.log(psi_upper_bound(profile, theta))), 1.0,
                                          slack, case_id=case_id, label="psi_upper")
        ]
        pivot = psi_sandwich(profile, R, psi, theta)
        log_pivot = float(psi.log_evaluate(R)) + float(profile.sqrt(R)) * (theta - R)
        if pivot.side is not BoundSide.ABOVE:
            reports.append(InequalityReport.compare_logs(log_pivot, log_psi, 1.0, slack,
                                                         case_id=case_id, label="psi_pivot_below"))
        if pivot.side is not BoundSide.BELOW:
            reports.append(InequalityReport.compare_logs(log_psi, log_pivot, 1.0, slack,
                                                         case_id=case_id, label="psi_pivot_above"))
        if theta0 is not None and theta >= theta0:
            lower = psi_lower_bound(profile, epsilon, theta0, theta, psi)
            reports.append(InequalityReport.compare_logs(float(np.log(lower.bound)), log_psi, 1.0, slack,
                                                         case_id=case_id, label="psi_lower"))
        return reports

    return _run(config, case, "sandwich")
