"""synth: generate candidate cities and a planted release."""

import re
from datetime import date
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import Field, field_validator

from src.commands.artifacts import ArtifactWriter
from src.commands.base import SeededOptions, arg, command, parse_pair, require_file
from src.synth.config import SynthConfig, VenueSpike
from src.synth.generator import gen_traces
from src.synth.templates import gen_city_rasters, gen_region_raster
from src.utils.logger import get_logger

logger = get_logger(__name__)

_SPIKE_PATTERN = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*:\s*(.+)$")


def parse_spike(text: str, baseline: int) -> VenueSpike:
    """
    Parse ``XxY:DAY=MAG;DAY=MAG`` into a VenueSpike.

    Example:
        >>> parse_spike("12x40:5=300;9=250", baseline=20).days
        [5, 9]
    """
    match = _SPIKE_PATTERN.match(text)
    if not match:
        raise ValueError(f"spikes: expected XxY:DAY=MAG;..., got {text!r}")
    days, magnitudes = [], []
    for event in match.group(3).split(";"):
        day, _, magnitude = event.partition("=")
        if not magnitude:
            raise ValueError(f"spikes: event {event!r} is not DAY=MAG")
        days.append(int(day))
        magnitudes.append(int(magnitude))
    return VenueSpike(
        cell=(int(match.group(1)), int(match.group(2))),
        days=days,
        magnitudes=magnitudes,
        baseline=baseline,
    )


class SynthInput(SeededOptions):
    """Inputs of synth; each field maps onto SynthConfig."""

    n_templates: int = Field(10, ge=2, le=30)
    template_id: str = Field("monocentric")
    clusters: Tuple[int, int] = Field((40, 40), description="Block size for template checks")
    users: int = Field(1000, ge=1)
    transform: str = Field("identity", description="Planted symmetry")
    start_date: date = Field(date(2019, 9, 15))
    calendar: Optional[Path] = Field(None, description="Holiday CSV; bundled JP calendar if unset")
    commuter_fraction: float = Field(0.8, ge=0.0, le=1.0)
    noise: float = Field(0.0, ge=0.0)
    observation_rate: float = Field(0.5, gt=0.0, le=1.0)
    weekend_home_share: float = Field(0.6, ge=0.0, le=1.0)
    favorite_count: int = Field(2, ge=0, le=10)
    spikes: List[str] = Field(default_factory=list, description="Venue events XxY:DAY=MAG;...")
    spike_baseline: int = Field(20, ge=0, description="Daily visitors of every venue")
    center_lat: float = Field(35.0, ge=-80, le=80)
    center_lon: float = Field(137.0, ge=-150, le=150)
    region_extent: Optional[float] = Field(None, ge=1.0, description="Also write a region raster")

    @field_validator("clusters", mode="before")
    @classmethod
    def parse_clusters(cls, value: object) -> Tuple[int, int]:
        return parse_pair(value, "clusters")

    @field_validator("spikes")
    @classmethod
    def check_spikes(cls, value: List[str]) -> List[str]:
        for spike in value:
            parse_spike(spike, baseline=0)
        return value

    def synth_config(self) -> SynthConfig:
        calendar = require_file(self.calendar, "calendar") if self.calendar else None
        return SynthConfig(
            seed=self.seed,
            grid=self.grid_spec,
            n_templates=self.n_templates,
            template_id=self.template_id,
            cluster=self.clusters,
            users=self.users,
            day_count=self.day_count,
            transform=self.transform,
            start_date=self.start_date,
            calendar=str(calendar) if calendar else None,
            commuter_fraction=self.commuter_fraction,
            noise=self.noise,
            observation_rate=self.observation_rate,
            weekend_home_share=self.weekend_home_share,
            favorite_count=self.favorite_count,
            spikes=[parse_spike(s, self.spike_baseline) for s in self.spikes],
            center_lat=self.center_lat,
            center_lon=self.center_lon,
        )


@command(
    "synth",
    SynthInput,
    "Generate synthetic city rasters and a release with planted ground truth",
    arguments=(
        arg("--n-templates", type=int),
        arg("--template-id"),
        arg("--clusters"),
        arg("--users", type=int),
        arg("--transform"),
        arg("--start-date"),
        arg("--calendar"),
        arg("--commuter-fraction", type=float),
        arg("--noise", type=float),
        arg("--observation-rate", type=float),
        arg("--weekend-home-share", type=float),
        arg("--favorite-count", type=int),
        arg("--spikes", nargs="+"),
        arg("--spike-baseline", type=int),
        arg("--center-lat", type=float),
        arg("--center-lon", type=float),
        arg("--region-extent", type=float),
    ),
)
def synth(params: SynthInput, writer: ArtifactWriter) -> None:
    """Write traces.csv, ground_truth.json, rasters/<city>.csv and optionally region.csv."""
    cfg = params.synth_config()
    rasters = gen_city_rasters(cfg)
    traces, truth = gen_traces(cfg, rasters, params.workers)

    writer.traces("traces.csv", traces)
    writer.json("ground_truth.json", truth)
    for raster in rasters:
        writer.raster(f"rasters/{raster.name}.csv", raster)
    if params.region_extent is not None:
        writer.raster("region.csv", gen_region_raster(cfg, extent=params.region_extent))

    logger.info(
        "synth_completed",
        template=truth.template_id,
        transform=truth.transform,
        users=traces.n_users,
        samples=traces.n_samples,
        cities=len(rasters),
    )
