from pathlib import Path

import numpy as np

from energystudio.tables import read_table

PSI_COLUMNS = ("theta", "psi", "dpsi")


def read_psi_csv(path: str | Path) -> dict[str, np.ndarray]:
    """
    Read the `theta,psi,dpsi` columns of a ψ table, ignoring any extra bound columns.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If a required column is missing.
    """
    frame, _ = read_table(path)
    missing = [column for column in PSI_COLUMNS if column not in frame.columns]
    if missing:
        raise ValueError(f"The ψ table is missing columns: {missing}")
    return {column: frame[column].to_numpy(dtype=float) for column in PSI_COLUMNS}
