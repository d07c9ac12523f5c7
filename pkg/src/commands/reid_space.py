"""
reid-space: recover the city, symmetry and geographic anchor of a release.

Composes density_field -> match_city and, with --align, hill_climb_align on
the field moved into the matched city's orientation.
"""

from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import Field, field_validator, model_validator

from src.commands.artifacts import ArtifactWriter
from src.commands.base import CommonOptions, arg, command, parse_pair, require_file
from src.spatial.alignment import DEFAULT_STEP_DEG, hill_climb_align
from src.spatial.density import apply_transform, density_field
from src.spatial.matching import DEFAULT_CLUSTER, match_city, match_days
from src.spatial.raster import GeoRasterSampler, cells_to_geo
from src.spatial.transforms import DihedralTransform
from src.traces.catalogs import load_raster
from src.traces.store import load_traceset
from src.utils.logger import get_logger

logger = get_logger(__name__)


class ReidSpaceInput(CommonOptions):
    """Inputs of reid-space."""

    traces: Path = Field(..., description="Trace CSV")
    rasters: List[Path] = Field(..., min_length=1, description="Candidate city rasters")
    clusters: Tuple[int, int] = Field(DEFAULT_CLUSTER, description="Block size WxH")
    mode: Literal["visits", "unique_users"] = Field("visits")
    per_day: bool = Field(False, description="Also match every single day")
    align: bool = Field(False, description="Hill-climb the geographic anchor")
    region: Optional[Path] = Field(None, description="Sampler raster for alignment")
    start_lat: Optional[float] = Field(None, ge=-90, le=90)
    start_lon: Optional[float] = Field(None, ge=-180, le=180)
    step_deg: float = Field(DEFAULT_STEP_DEG, gt=0)
    restarts: int = Field(0, ge=0)
    restart_radius: float = Field(0.1, gt=0)
    max_iterations: int = Field(10_000, ge=1)
    block_objective: bool = Field(False, description="Climb on the clustered score")

    @field_validator("clusters", mode="before")
    @classmethod
    def parse_clusters(cls, value: object) -> Tuple[int, int]:
        return parse_pair(value, "clusters")

    @model_validator(mode="after")
    def check_restarts(self) -> "ReidSpaceInput":
        if self.restarts and self.seed is None:
            raise ValueError("--restarts needs an explicit --seed")
        if (self.start_lat is None) != (self.start_lon is None):
            raise ValueError("give both --start-lat and --start-lon")
        return self


@command(
    "reid-space",
    ReidSpaceInput,
    "Match a release against city rasters and recover its geographic anchor",
    arguments=(
        arg("--traces", required=True),
        arg("--rasters", nargs="+", required=True),
        arg("--clusters"),
        arg("--mode", choices=["visits", "unique_users"]),
        arg("--per-day", action="store_true"),
        arg("--align", action="store_true"),
        arg("--region"),
        arg("--start-lat", type=float),
        arg("--start-lon", type=float),
        arg("--step-deg", type=float),
        arg("--restarts", type=int),
        arg("--restart-radius", type=float),
        arg("--max-iterations", type=int),
        arg("--block-objective", action="store_true"),
    ),
)
def reid_space(params: ReidSpaceInput, writer: ArtifactWriter) -> None:
    """
    Write match.json and scores.csv; per_day.csv with --per-day; and
    alignment.json plus alignment_path.csv with --align.
    """
    grid = params.grid_spec
    ts = load_traceset(require_file(params.traces, "traces"), grid, params.day_count)
    rasters = [load_raster(require_file(p, "rasters")) for p in params.rasters]

    field = density_field(ts, mode=params.mode)
    match = match_city(field, rasters, params.clusters, grid, params.workers)
    writer.json("match.json", match)
    writer.csv(
        "scores.csv",
        [s.model_dump() for s in match.scores],
        columns=["city", "transform", "transform_index", "correlation", "cell_correlation"],
    )

    if params.per_day:
        daily = match_days(
            ts, rasters, range(ts.day_count), params.clusters, params.mode, params.workers
        )
        writer.csv(
            "per_day.csv",
            [
                {
                    "day": day,
                    "city": result.best_city,
                    "transform": result.best_transform,
                    "correlation": result.best_correlation,
                    "margin": result.margin,
                }
                for day, result in sorted(daily.items())
            ],
            columns=["day", "city", "transform", "correlation", "margin"],
        )

    if not params.align:
        return

    city = next(r for r in rasters if r.name == match.best_city)
    region = load_raster(require_file(params.region, "region")) if params.region else city
    oriented = apply_transform(field, DihedralTransform.parse(match.best_transform))
    start = (
        (params.start_lat, params.start_lon)
        if params.start_lat is not None and params.start_lon is not None
        else (city.center_lat, city.center_lon)
    )
    alignment = hill_climb_align(
        oriented,
        GeoRasterSampler(region),
        start,
        step=params.step_deg,
        grid=grid,
        cluster=params.clusters if params.block_objective else None,
        max_iterations=params.max_iterations,
        restarts=params.restarts,
        restart_radius=params.restart_radius,
        seed=params.seed,
    )
    writer.json("alignment.json", alignment)
    writer.csv(
        "alignment_path.csv",
        [step.model_dump() for step in alignment.path],
        columns=["lat", "lon", "correlation"],
    )
    corner_lat, corner_lon = cells_to_geo(alignment, grid, (0, 0))
    logger.info(
        "reid_space_completed",
        city=match.best_city,
        transform=match.best_transform,
        center_lat=round(alignment.center_lat, 6),
        center_lon=round(alignment.center_lon, 6),
        origin_cell_lat=round(corner_lat, 6),
        origin_cell_lon=round(corner_lon, 6),
    )
