"""sweep: privacy-utility sweep of one mechanism over a parameter grid."""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import Field, field_validator, model_validator

from src.cache.manager import RowCache
from src.commands.artifacts import ArtifactWriter
from src.commands.base import SeededOptions, arg, command, parse_pair, require_file
from src.spatial.matching import DEFAULT_CLUSTER
from src.traces.catalogs import load_raster
from src.traces.store import load_traceset
from src.utility.sweep import METRIC_COLUMNS, sanitizer_sweep, summarize_rows
from src.utils.logger import get_logger

logger = get_logger(__name__)

UtilityMetric = Literal["reid", "kl", "correlation", "margin"]


class SweepInput(SeededOptions):
    """Inputs of sweep; repeat i of every point is sanitized with seed + i."""

    traces: Path = Field(..., description="Trace CSV")
    mechanism: Literal["geoind", "grr", "destructure"]
    epsilons: List[float] = Field(default_factory=list, description="Epsilon grid")
    level: Optional[float] = Field(None, gt=0, description="geoind privacy level")
    radii: List[float] = Field(default_factory=list, description="geoind radii in meters")
    scopes: List[Literal["grid", "visited"]] = Field(default_factory=lambda: ["grid"])
    identity: bool = Field(False, description="Add the identity permutation as a point")
    metrics: List[UtilityMetric] = Field(default_factory=lambda: ["reid", "kl"], min_length=1)
    repeats: int = Field(1, ge=1)
    reference: Optional[Path] = Field(None, description="Raster for the correlation metric")
    rasters: List[Path] = Field(default_factory=list, description="Cities for the margin metric")
    clusters: Tuple[int, int] = Field(DEFAULT_CLUSTER)
    debias: bool = Field(True, description="Debias grr output before KL")
    cache_dir: Optional[Path] = Field(None, description="Row cache directory")

    @field_validator("clusters", mode="before")
    @classmethod
    def parse_clusters(cls, value: object) -> Tuple[int, int]:
        return parse_pair(value, "clusters")

    @model_validator(mode="after")
    def check_grid_points(self) -> "SweepInput":
        if any(e <= 0 for e in self.epsilons) or any(r <= 0 for r in self.radii):
            raise ValueError("epsilons and radii must be > 0")
        if self.mechanism == "grr" and not self.epsilons:
            raise ValueError("grr needs --epsilons")
        if self.mechanism == "geoind":
            by_level = self.level is not None and bool(self.radii)
            if bool(self.epsilons) == by_level:
                raise ValueError("geoind needs --epsilons or both --level and --radii")
        if "correlation" in self.metrics and self.reference is None:
            raise ValueError("the correlation metric needs --reference")
        if "margin" in self.metrics and not self.rasters:
            raise ValueError("the margin metric needs --rasters")
        return self

    def points(self) -> List[Dict[str, Any]]:
        if self.mechanism == "grr":
            return [{"epsilon": e} for e in self.epsilons]
        if self.mechanism == "geoind":
            if self.epsilons:
                return [{"epsilon": e} for e in self.epsilons]
            return [{"level": self.level, "radius_m": r} for r in self.radii]
        points: List[Dict[str, Any]] = [
            {"scope": scope, "identity": False} for scope in dict.fromkeys(self.scopes)
        ]
        if self.identity:
            points.append({"scope": "grid", "identity": True})
        return points


@command(
    "sweep",
    SweepInput,
    "Sweep a sanitizer over a parameter grid and evaluate utility",
    arguments=(
        arg("--traces", required=True),
        arg("--mechanism", required=True, choices=["geoind", "grr", "destructure"]),
        arg("--epsilons", nargs="+", type=float),
        arg("--level", type=float),
        arg("--radii", nargs="+", type=float),
        arg("--scopes", nargs="+", choices=["grid", "visited"]),
        arg("--identity", action="store_true"),
        arg("--metrics", nargs="+", choices=list(METRIC_COLUMNS)),
        arg("--repeats", type=int),
        arg("--reference"),
        arg("--rasters", nargs="+"),
        arg("--clusters"),
        arg("--no-debias", dest="debias", action="store_false"),
        arg("--cache-dir"),
    ),
)
def sweep(params: SweepInput, writer: ArtifactWriter) -> None:
    """Write sweep.json, sweep.csv and summary.csv."""
    grid = params.grid_spec
    ts = load_traceset(require_file(params.traces, "traces"), grid, params.day_count)
    reference = None
    if params.reference:
        reference = load_raster(require_file(params.reference, "reference"))
    rasters = [load_raster(require_file(p, "rasters")) for p in params.rasters]

    report = sanitizer_sweep(
        ts,
        params.mechanism,
        params.points(),
        params.metrics,
        params.seed,
        repeats=params.repeats,
        reference=reference,
        rasters=rasters,
        cluster=params.clusters,
        debias=params.debias,
        cache=RowCache(params.cache_dir),
        workers=params.workers,
    )
    writer.json("sweep.json", report)
    writer.csv("sweep.csv", report.rows, columns=report.columns)
    writer.csv("summary.csv", summarize_rows(report))
    logger.info(
        "sweep_completed",
        mechanism=params.mechanism,
        rows=len(report.rows),
        failed_rows=sum(1 for r in report.rows if r.get("error")),
    )
