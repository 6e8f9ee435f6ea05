"""
CSV tables with `#`-prefixed footer comments.

Every file the package emits goes through `write_table`, so identical inputs
give byte-identical files, and every file can be read back with `read_table`.
"""

from collections.abc import Iterable
from pathlib import Path

import pandas as pd

FLOAT_FORMAT = "%.17g"


def write_table(frame: pd.DataFrame, path: str | Path, footer: Iterable[str] = ()) -> Path:
    """
    Write a frame as CSV followed by footer comment lines.

    Args:
        frame (pd.DataFrame): Table to write; the index is dropped.
        path (str or Path): Destination file.
        footer (Iterable[str]): Lines written after the table, each prefixed with '# '.

    Returns:
        Path: The written path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    lines = [f"# {line}\n" for line in footer]
    path.write_text(text + "".join(lines), encoding="utf-8")
    return path


def read_table(path: str | Path) -> tuple[pd.DataFrame, list[str]]:
    """
    Read a table written by `write_table`.

    Returns:
        Tuple[pd.DataFrame, List[str]]: The table and its footer lines without the '# ' prefix.

    Raises:
        FileNotFoundError: If the file does not exist.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Table not found: {path}")
    frame = pd.read_csv(path, comment="#")
    footer = [
        line[1:].strip()
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.startswith("#")
    ]
    return frame, footer
