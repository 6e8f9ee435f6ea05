"""
Command implementations.

Each command reads its sections from a `RunConfig`, runs one pipeline and
writes its tables into the output directory once the results are complete.
Commands return the process exit code for outcomes that are data (failed
checks, a search that did not converge); errors are raised and mapped to exit
codes by `energystudio.cli.main`.
"""

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pandas as pd

from energystudio.energy.scans import blowup_scan, spreading_scan
from energystudio.energy.terms import kernel_for, total_energy
from energystudio.geometry.bounds import find_theta0, psi_sandwich, psi_upper_bound
from energystudio.geometry.psi import solve_psi
from energystudio.groundstate.certificate import existence_certificate, write_certificate
from energystudio.groundstate.minimizer import minimize_radial
from energystudio.inequalities.campaigns import (
    CampaignConfig,
    carlson_levin_campaign,
    convexity_campaign,
    general_carlson_levin_campaign,
    reversed_hls_campaign,
    sandwich_campaign,
)
from energystudio.inequalities.schemas import InequalityReport, reports_frame
from energystudio.logging_config import get_logger
from energystudio.measures.io import read_radial_density_csv, write_radial_density_csv
from energystudio.measures.radial import uniform_ball
from energystudio.tables import write_table

from .config import (
    EnergySection,
    MinimizeSection,
    PsiSection,
    RunConfig,
    ScanSection,
    VerifySection,
    parse_section,
)

logger = get_logger("cli.commands")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_NOT_CONVERGED = 4

PSI_COLUMNS = ["theta", "psi", "dpsi", "upper_bound", "sandwich_bound"]
ENERGY_COLUMNS = ["entropy", "interaction", "total", "q", "quadrature_error_estimate"]

Campaign = Callable[[CampaignConfig, VerifySection], list[InequalityReport]]

CAMPAIGN_MAP: dict[str, Campaign] = {
    "carlson_levin": lambda config, section: carlson_levin_campaign(config),
    "carlson_levin_general": lambda config, section: general_carlson_levin_campaign(config),
    "convexity": lambda config, section: convexity_campaign(config, lam=section.convexity_lam),
    "convexity_negative_control": lambda config, section: convexity_campaign(
        config, lam=section.convexity_lam, negative_offset=section.negative_offset
    ),
    "convexity_unnormalized": lambda config, section: convexity_campaign(
        config, lam=section.convexity_lam, unnormalized=True
    ),
    "reversed_hls": lambda config, section: reversed_hls_campaign(config),
    "sandwich": lambda config, section: sandwich_campaign(config, profile_count=section.profile_count),
}

# The negative control is expected to fail and only runs when named.
ALL_CAMPAIGNS = [name for name in CAMPAIGN_MAP if name != "convexity_negative_control"]

SCAN_MAP = {"spreading": spreading_scan, "blowup": blowup_scan}


def cmd_psi(config: RunConfig, out_dir: Path) -> int:
    """
    Solve ψ″ = c(θ)ψ for the `[profile]` section and tabulate it with its bounds.

    Writes `psi.csv` with columns `theta,psi,dpsi,upper_bound,sandwich_bound`.
    A bound that does not apply to the profile (or to θ = 0 for the pivot
    bound) is left empty. The footer records the pivot radius and, for
    profiles flagged `satisfies_c32`, the anchor θ₀ of the relaxed lower bound.
    """
    profile = config.build_profile("profile")
    settings = parse_section(PsiSection, config.section("psi"), "psi")
    solution = solve_psi(profile, settings.theta_max, settings.tol)

    frame = solution.to_frame()
    theta = solution.theta_grid
    if profile.monotone_nondecreasing:
        frame["upper_bound"] = [psi_upper_bound(profile, float(t)) for t in theta]
        frame["sandwich_bound"] = [
            psi_sandwich(profile, settings.pivot, solution, float(t)).bound if t > 0 else np.nan for t in theta
        ]
    else:
        frame["upper_bound"] = np.nan
        frame["sandwich_bound"] = np.nan

    footer = [f"kind={profile.kind}", f"pivot={settings.pivot!r}"]
    if profile.satisfies_c32:
        theta0 = find_theta0(profile, settings.epsilon, solution)
        footer += [f"epsilon={settings.epsilon!r}", f"theta0={theta0!r}"]
    write_table(frame[PSI_COLUMNS], out_dir / "psi.csv", footer)
    logger.info("Wrote comparison function table", extra={"nodes": theta.size, "theta_max": settings.theta_max})
    return EXIT_OK


def cmd_scan(config: RunConfig, out_dir: Path) -> int:
    """
    Radius scan of the uniform-ball family.

    Writes `scan.csv` (`R,entropy,interaction,total,bound`) with the verdict in
    the footer and prints the verdict line. The verdict is data, so the exit
    code is 0 whatever it is.
    """
    manifold = config.build_manifold()
    h = config.build_potential()
    settings = parse_section(ScanSection, config.section("scan"), "scan")
    scan = SCAN_MAP[settings.kind]
    result = scan(
        manifold, config.q, h, settings.radii, floor=settings.floor,
        with_energies=settings.with_energies, threads=config.run.threads,
    )
    footer = [result.summary(), f"kind={result.kind}", f"floor={result.floor!r}"]
    write_table(result.to_frame(), out_dir / "scan.csv", footer)
    print(result.summary())
    return EXIT_OK


def _verify_frame(reports: list[InequalityReport]) -> pd.DataFrame:
    frame = reports_frame(reports)
    frame["label"] = [report.label for report in reports]
    return frame


def cmd_verify(config: RunConfig, out_dir: Path) -> int:
    """
    Run the seeded inequality campaigns.

    Writes one `verify_<campaign>.csv` per campaign
    (`case_id,lhs,rhs,ratio,passed,label`). Returns 1 if any check failed.
    """
    settings = parse_section(VerifySection, config.section("verify"), "verify")
    campaign_config = settings.campaign_config(config.run.seed, config.run.threads)
    names = ALL_CAMPAIGNS if settings.campaign == "all" else [settings.campaign]

    failures = 0
    for name in names:
        reports = CAMPAIGN_MAP[name](campaign_config, settings)
        failed = sum(not report.passed for report in reports)
        failures += failed
        footer = [
            f"campaign={name}",
            f"seed={campaign_config.seed}",
            f"checks={len(reports)}",
            f"failures={failed}",
        ]
        write_table(_verify_frame(reports), out_dir / f"verify_{name}.csv", footer)
        print(f"{name}: {len(reports) - failed}/{len(reports)} checks passed")

    if failures:
        logger.warning("Verification failed", extra={"failures": failures, "campaigns": names})
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_minimize(config: RunConfig, out_dir: Path) -> int:
    """
    Ground-state search with its run log, final density and certificate.

    Writes `run_log.csv`, `density.csv` and `probes.csv` in every case, and
    `certificate.json` for converged runs. Returns 4 if the search did not
    converge and 1 if the certificate does not pass.
    """
    manifold = config.build_manifold()
    h = config.build_potential()
    settings = MinimizeSection.from_section(config.section("minimize"))
    opts = settings.minimizer_options(config.run.threads)
    q = config.q
    init = read_radial_density_csv(settings.init_file, manifold) if settings.init_file is not None else None

    result = minimize_radial(manifold, q, h, init=init, opts=opts, lam=settings.lam)
    footer = [
        f"status={result.status}",
        f"iterations={result.iterations}",
        f"energy={result.energy.total!r}",
        f"foc_residual={result.foc_residual!r}",
        f"lagrange_multiplier={result.lagrange_multiplier!r}",
        f"concentration={result.concentration!r}",
        f"tail_mass={result.tail_mass!r}",
        f"radial_restriction={str(result.radial_restriction).lower()}",
    ]
    write_table(result.history_frame(), out_dir / "run_log.csv")
    write_radial_density_csv(result.density, out_dir / "density.csv", footer)
    write_table(result.probes_frame(), out_dir / "probes.csv")

    if not result.converged:
        logger.warning("Ground-state search did not converge", extra={"status": result.status})
        return EXIT_NOT_CONVERGED
    if not settings.certificate:
        return EXIT_OK

    lam = settings.lam if settings.lam is not None else h.growth_exponent
    c_m = settings.c_m if settings.c_m is not None else manifold.require_constant("The existence certificate")
    certificate = existence_certificate(result, lam, c_m, h, q)
    write_certificate(certificate, out_dir / "certificate.json")
    print(f"certificate passed={str(certificate.passed).lower()}; existence by {certificate.theorem}")
    return EXIT_OK if certificate.passed else EXIT_VERIFY_FAILED


def cmd_energy(config: RunConfig, out_dir: Path) -> int:
    """
    Free energy of a uniform ball, or of the density table named by `init_file`.

    Writes `energy.csv` (`entropy,interaction,total,q,quadrature_error_estimate`).
    """
    manifold = config.build_manifold()
    h = config.build_potential()
    settings = parse_section(EnergySection, config.section("energy"), "energy")
    q = config.q
    if settings.init_file is not None:
        rho = read_radial_density_csv(settings.init_file, manifold)
        source = f"file={settings.init_file}"
    else:
        rho = uniform_ball(manifold, settings.radius, settings.grid_size)
        source = f"radius={settings.radius!r}"
    kernel = kernel_for(rho, h, settings.kernel_nodes) if manifold.is_constant else None
    energy = total_energy(rho, q, h, kernel)
    frame = pd.DataFrame([energy.model_dump()], columns=ENERGY_COLUMNS)
    write_table(frame, out_dir / "energy.csv", [source, f"potential={h.kind}"])
    print(f"energy={energy.total!r}")
    return EXIT_OK


COMMAND_MAP: dict[str, Callable[[RunConfig, Path], int]] = {
    "psi": cmd_psi,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "minimize": cmd_minimize,
    "energy": cmd_energy,
}


def get_command(name: str) -> Callable[[RunConfig, Path], int]:
    """
    Raises:
        ValueError: If the command does not exist.
    """
    command = COMMAND_MAP.get(name.lower())
    if not command:
        raise ValueError(f"Invalid command: '{name}'. Valid options are: {list(COMMAND_MAP.keys())}")
    return command
