from collections.abc import Iterable
from pathlib import Path

import pandas as pd
import srsly

from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.schemas import CurvatureProfile
from energystudio.tables import read_table, write_table

from .schemas import DiscreteMeasure, Potential, RadialDensity


def write_radial_density_csv(rho: RadialDensity, path: str | Path, footer: Iterable[str] = ()) -> Path:
    """Write a density as the two-column table `r,rho`."""
    frame = pd.DataFrame({"r": rho.r_grid, "rho": rho.values})
    return write_table(frame, path, footer)


def read_radial_density_csv(path: str | Path, manifold: ModelManifold) -> RadialDensity:
    """
    Read an `r,rho` table into a density on `manifold`.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the columns are missing or the values do not form a valid density.
    """
    frame, _ = read_table(path)
    if list(frame.columns[:2]) != ["r", "rho"]:
        raise ValueError(f"A density table must start with columns 'r,rho', got {list(frame.columns)}.")
    return RadialDensity(
        manifold=manifold,
        r_grid=frame["r"].to_numpy(dtype=float),
        values=frame["rho"].to_numpy(dtype=float),
    )


def write_discrete_measure_csv(mu: DiscreteMeasure, path: str | Path, footer: Iterable[str] = ()) -> Path:
    """Write a cloud as the table `w,v1,...,vd`."""
    frame = pd.DataFrame(mu.log_points, columns=[f"v{i + 1}" for i in range(mu.dim)])
    frame.insert(0, "w", mu.weights)
    return write_table(frame, path, footer)


def read_discrete_measure_csv(path: str | Path, curvature: float, centred: bool = False) -> DiscreteMeasure:
    """
    Read a `w,v1,...,vd` table into a cloud.

    Raises:
        ValueError: If the header is malformed or `centred` is requested for an uncentred cloud.
    """
    frame, _ = read_table(path)
    dim = frame.shape[1] - 1
    expected = ["w"] + [f"v{i + 1}" for i in range(dim)]
    if list(frame.columns) != expected:
        raise ValueError(f"A cloud table must have columns {expected}, got {list(frame.columns)}.")
    return DiscreteMeasure(
        dim=dim,
        curvature=curvature,
        log_points=frame[expected[1:]].to_numpy(dtype=float),
        weights=frame["w"].to_numpy(dtype=float),
        centred=centred,
    )


def save_potential(h: Potential, path: str | Path) -> None:
    srsly.write_json(path, h.model_dump(exclude_none=True))


def load_potential(path: str | Path) -> Potential:
    return Potential(**srsly.read_json(path))


def save_profile(profile: CurvatureProfile, path: str | Path) -> None:
    srsly.write_json(path, profile.model_dump(exclude_none=True))


def load_profile(path: str | Path) -> CurvatureProfile:
    return CurvatureProfile(**srsly.read_json(path))
