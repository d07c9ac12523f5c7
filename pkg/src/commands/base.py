"""
Shared plumbing for subcommands.

Each subcommand module defines a pydantic input model derived from
CommonOptions and a handler registered with the ``command`` decorator.
main.py builds the argument parser from the registry, validates the merged
config-file and CLI values into the input model and calls the handler.
"""

import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import (
    Any,
    Callable,
    Dict,
    List,
    Optional,
    Tuple,
    Type,
    Union,
    get_args,
    get_origin,
)

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.commands.artifacts import ArtifactWriter
from src.exceptions import ValidationError
from src.models.reports import Manifest
from src.traces.grid import GridSpec
from src.traces.store import DEFAULT_DAY_COUNT
from src.utils.logger import get_logger, timed_stage

logger = get_logger(__name__)


def _is_list(annotation: Any) -> bool:
    origin = get_origin(annotation)
    if origin in (list, List):
        return True
    if origin is Union:
        return any(_is_list(arg) for arg in get_args(annotation))
    return False


def parse_pair(value: Any, name: str) -> Tuple[int, int]:
    """Parse ``WxH`` or a two-element sequence into an int pair."""
    if isinstance(value, str):
        parts = value.lower().replace(",", "x").split("x")
        if len(parts) != 2:
            raise ValueError(f"{name}: expected WxH, got {value!r}")
        value = parts
    first, second = value
    return int(first), int(second)


class CommonOptions(BaseModel):
    """
    Options shared by every subcommand.

    Config-file values arrive as strings: list fields accept comma-separated
    text and pairs accept ``WxH``.
    """

    model_config = ConfigDict(extra="forbid")

    grid: str = Field("200x200", description="Grid size WxH")
    cell_size_m: float = Field(500.0, gt=0, description="Meters per cell side")
    day_count: int = Field(DEFAULT_DAY_COUNT, ge=1, description="Days in the release")
    seed: Optional[int] = Field(None, ge=0, description="Master seed")
    workers: Optional[int] = Field(None, ge=1, description="Concurrency cap")
    out: Path = Field(Path("out"), description="Output directory")

    @model_validator(mode="before")
    @classmethod
    def split_lists(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        for name, info in cls.model_fields.items():
            value = data.get(name)
            if isinstance(value, str) and _is_list(info.annotation):
                data[name] = [part.strip() for part in value.split(",") if part.strip()]
        return data

    @field_validator("grid")
    @classmethod
    def check_grid(cls, value: str) -> str:
        GridSpec.parse(value)
        return value

    @property
    def grid_spec(self) -> GridSpec:
        return GridSpec.parse(self.grid, self.cell_size_m)


class SeededOptions(CommonOptions):
    """Options of stochastic subcommands; the seed is mandatory."""

    seed: int = Field(..., ge=0, description="Master seed")


def require_file(path: Path, field: str) -> Path:
    if not Path(path).is_file():
        raise ValidationError(f"file not found: {path}", field=field)
    return Path(path)


Handler = Callable[[Any, ArtifactWriter], None]


@dataclass(frozen=True)
class Command:
    """A registered subcommand."""

    name: str
    input_model: Type[CommonOptions]
    handler: Handler
    help: str
    arguments: Tuple[Tuple[Tuple[str, ...], Dict[str, Any]], ...] = ()

    def run(self, values: Dict[str, Any]) -> Manifest:
        """Validate values, run the handler and write the manifest."""
        params = self.input_model.model_validate(values)
        writer = ArtifactWriter(params.out)
        logger.info("command_started", command=self.name, out=str(params.out))
        with timed_stage(self.name):
            self.handler(params, writer)
        return writer.finalize(self.name)

    def add_parser(self, subparsers: Any, parents: List[argparse.ArgumentParser]) -> None:
        parser = subparsers.add_parser(self.name, help=self.help, parents=parents)
        for flags, kwargs in self.arguments:
            parser.add_argument(*flags, default=argparse.SUPPRESS, **kwargs)


COMMANDS: Dict[str, Command] = {}


def command(
    name: str,
    input_model: Type[CommonOptions],
    help: str,
    arguments: Tuple[Tuple[Tuple[str, ...], Dict[str, Any]], ...] = (),
) -> Callable[[Handler], Handler]:
    """
    Register a subcommand handler.

    Example:
        >>> @command("validate", ValidateInput, "Check inputs")
        ... def validate(params: ValidateInput, writer: ArtifactWriter) -> None:
        ...     ...
    """

    def decorator(handler: Handler) -> Handler:
        if name in COMMANDS:
            raise ValueError(f"command {name!r} registered twice")
        COMMANDS[name] = Command(name, input_model, handler, help, arguments)
        return handler

    return decorator


def arg(*flags: str, **kwargs: Any) -> Tuple[Tuple[str, ...], Dict[str, Any]]:
    """One argparse argument; dests default to the long flag with underscores."""
    return flags, kwargs
