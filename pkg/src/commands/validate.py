"""validate: load a release and any catalogs, and report what was read."""

from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import Field

from src.commands.artifacts import ArtifactWriter
from src.commands.base import CommonOptions, arg, command, require_file
from src.traces.catalogs import load_holidays, load_pois, load_raster
from src.traces.store import load_traceset, summarize
from src.utils.logger import get_logger

logger = get_logger(__name__)


class ValidateInput(CommonOptions):
    """Inputs of validate; every file given must load cleanly."""

    traces: Path = Field(..., description="Trace CSV")
    rasters: List[Path] = Field(default_factory=list)
    calendar: Optional[Path] = None
    pois: Optional[Path] = None
    keywords: List[str] = Field(default_factory=list)


@command(
    "validate",
    ValidateInput,
    "Check a trace file and optional catalogs; exit 2 on the first problem",
    arguments=(
        arg("--traces", required=True),
        arg("--rasters", nargs="+"),
        arg("--calendar"),
        arg("--pois"),
        arg("--keywords", nargs="+"),
    ),
)
def validate(params: ValidateInput, writer: ArtifactWriter) -> None:
    """Write validation.json with the trace summary and catalog details."""
    grid = params.grid_spec
    ts = load_traceset(require_file(params.traces, "traces"), grid, params.day_count)
    report: Dict[str, Any] = {"traces": summarize(ts)}

    if params.rasters:
        report["rasters"] = [
            load_raster(require_file(p, "rasters")).metadata().model_dump(mode="json")
            for p in params.rasters
        ]
    if params.calendar:
        calendar = load_holidays(require_file(params.calendar, "calendar"))
        report["calendar"] = {
            "holidays": len(calendar.holidays),
            "weekday_holidays": len(calendar.weekday_holidays()),
            "coverage_start": calendar.coverage_start.isoformat(),
            "coverage_end": calendar.coverage_end.isoformat(),
        }
    if params.pois:
        catalog = load_pois(require_file(params.pois, "pois"), grid, params.keywords or None)
        report["pois"] = {
            "entries": len(catalog.entries),
            "sensitive_cells": len(catalog.sensitive_cells()),
            "keywords": list(catalog.keywords),
        }

    writer.json("validation.json", report)
    logger.info("validation_passed", **report["traces"])
