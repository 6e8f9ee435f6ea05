from pathlib import Path

DEFAULTS_DIR = Path(__file__).parent


def read_defaults(name: str) -> str:
    """Read the default configuration of a command"""

    path = DEFAULTS_DIR / f"{name}.ini"

    if not path.exists():
        raise ValueError(f"{name} is not a valid command.")

    return path.read_text()
