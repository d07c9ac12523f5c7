"""
gridtrace - Main Entry Point

Builds the subcommand parser from the command registry, merges config-file
values with explicit flags, runs the command and maps failures to exit
codes with an ErrorResponse on stderr.
"""
import argparse
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import pydantic
from dotenv import dotenv_values, load_dotenv

import src.commands  # noqa: F401  registers the subcommands
from src import __version__
from src.commands.base import COMMANDS
from src.exceptions import EXIT_INTERNAL, EXIT_OK, EXIT_VALIDATION, ToolkitError
from src.models.reports import ErrorResponse
from src.utils.logger import get_logger, setup_logging

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Top-level parser; global flags are accepted after the subcommand name."""
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("global options")
    for flags, kwargs in (
        (("--grid",), {"help": "Grid size WxH"}),
        (("--cell-size-m",), {"type": float}),
        (("--day-count",), {"type": int}),
        (("--seed",), {"type": int, "help": "Master seed; required by stochastic commands"}),
        (("--workers",), {"type": int, "help": "Concurrency cap"}),
        (("--out",), {"help": "Output directory"}),
        (("--config",), {"help": "key=value file with default flag values"}),
        (("--log-level",), {"help": "DEBUG, INFO, WARNING or ERROR"}),
    ):
        group.add_argument(*flags, default=argparse.SUPPRESS, **kwargs)

    parser = argparse.ArgumentParser(
        prog="gridtrace", description="Re-identification and privacy toolkit for grid traces"
    )
    parser.add_argument("--version", action="version", version=f"gridtrace {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in sorted(COMMANDS):
        COMMANDS[name].add_parser(subparsers, [common])
    return parser


def load_config(path: str) -> Dict[str, Any]:
    """Read a dotenv-style config file; keys may use dashes or underscores."""
    config = Path(path)
    if not config.is_file():
        raise FileNotFoundError(f"config file not found: {config}")
    return {
        key.strip().replace("-", "_"): value
        for key, value in dotenv_values(config).items()
        if value is not None
    }


def error_response(error: BaseException) -> ErrorResponse:
    """Map an exception onto its exit code and a serializable payload."""
    data: Dict[str, Any] = {"error_type": type(error).__name__}
    if isinstance(error, ToolkitError):
        field = getattr(error, "field", None)
        if field:
            data["field"] = field
        return ErrorResponse(code=error.exit_code, message=error.message, data=data)
    if isinstance(error, pydantic.ValidationError):
        data["errors"] = [
            {"loc": ".".join(str(p) for p in e["loc"]), "msg": e["msg"]} for e in error.errors()
        ]
        return ErrorResponse(code=EXIT_VALIDATION, message="invalid parameters", data=data)
    if isinstance(error, FileNotFoundError):
        return ErrorResponse(code=EXIT_VALIDATION, message=str(error), data=data)
    return ErrorResponse(code=EXIT_INTERNAL, message=str(error) or type(error).__name__, data=data)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        Exit code: 0 success, 2 validation, 3 degeneracy, 4 internal error
    """
    load_dotenv()
    args = vars(build_parser().parse_args(argv))
    name = args.pop("command")
    config_path = args.pop("config", None)
    log_level = args.pop("log_level", None) or os.getenv("LOG_LEVEL", "INFO")
    setup_logging(level=log_level)

    try:
        values = load_config(config_path) if config_path else {}
        values.update(args)
        manifest = COMMANDS[name].run(values)
    except (ToolkitError, pydantic.ValidationError, FileNotFoundError) as e:
        response = error_response(e)
        logger.warning("command_failed", command=name, code=response.code, error=response.message)
        print(response.model_dump_json(), file=sys.stderr)
        return response.code
    except Exception as e:
        logger.error(
            "unexpected_error",
            command=name,
            error=str(e),
            error_type=type(e).__name__,
            exc_info=True,
        )
        print(error_response(e).model_dump_json(), file=sys.stderr)
        return EXIT_INTERNAL

    logger.info("command_completed", command=name, artifacts=len(manifest.artifacts))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
