"""
Entry point of the `energystudio` command.

Exit codes: 0 success, 1 failed verification, 2 invalid configuration or
parameters, 3 numerical failure, 4 not converged, 5 refused run.
"""

import argparse
import sys
from pathlib import Path

from dotenv import load_dotenv

from energystudio.exceptions import (
    ConfigError,
    EnergyStudioError,
    GrowthConditionRefusal,
    IntegratorFailureError,
    InvalidProfileError,
    ParameterError,
    PreconditionError,
    UnsupportedManifoldError,
)
from energystudio.logging_config import get_logger, set_log_level

from .commands import COMMAND_MAP, get_command
from .config import load_config
from .defaults import read_defaults

logger = get_logger("cli.main")

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_REFUSED = 5

CONFIG_ERRORS = (
    ConfigError,
    ParameterError,
    PreconditionError,
    UnsupportedManifoldError,
    InvalidProfileError,
    FileNotFoundError,
)


def _parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="energystudio",
        description="Free energies, functional inequalities and ground states on model manifolds.",
    )
    parser.add_argument("command", choices=list(COMMAND_MAP.keys()), help="Pipeline to run.")
    parser.add_argument("--config", type=Path, default=None, help="INI file layered over the command defaults.")
    parser.add_argument("--out", type=Path, default=Path("out"), help="Output directory.")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (overrides ENERGYSTUDIO_THREADS).")
    parser.add_argument("--seed", type=int, default=None, help="Seed override for the [run] section.")
    parser.add_argument("--print-defaults", action="store_true", help="Print the default configuration and exit.")
    parser.add_argument("--log-level", default=None, help="Logging level (DEBUG, INFO, WARNING, ERROR).")
    return parser.parse_args(argv)


def run(args: argparse.Namespace) -> int:
    """Run one command and map its errors to exit codes."""
    if args.print_defaults:
        print(read_defaults(args.command), end="")
        return 0
    try:
        config = load_config(args.command, args.config, seed=args.seed, threads=args.threads)
        config.write(args.out)
        return get_command(args.command)(config, args.out)
    except GrowthConditionRefusal as e:
        logger.error("Run refused", extra={"command": args.command, "theorem": e.theorem})
        print(f"refused: {e} (ruled out by {e.theorem})", file=sys.stderr)
        return EXIT_REFUSED
    except CONFIG_ERRORS as e:
        logger.error("Invalid run", extra={"command": args.command, "error": str(e)})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegratorFailureError, EnergyStudioError) as e:
        logger.error("Numerical failure", extra={"command": args.command, "error": str(e)})
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as e:
        logger.error("Invalid value", extra={"command": args.command, "error": str(e)})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    args = _parse_args(argv)
    if args.log_level:
        set_log_level(args.log_level)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
