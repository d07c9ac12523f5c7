"""
Configuration of synthetic cities and trajectories.

Every generated artifact is a pure function of a SynthConfig, so a config
plus its seed fully identifies a planted run.
"""

from datetime import date
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.spatial.transforms import DihedralTransform
from src.traces.grid import GridSpec
from src.traces.store import DEFAULT_DAY_COUNT

TEMPLATE_FAMILIES: Tuple[str, ...] = (
    "monocentric",
    "dual_core",
    "corridor",
    "ring",
    "polycentric",
    "coastal",
    "radial",
    "crescent",
    "cross",
    "scatter",
)


def template_names(count: int) -> List[str]:
    """Names of the first ``count`` templates; families repeat with a suffix."""
    names = []
    for i in range(count):
        family = TEMPLATE_FAMILIES[i % len(TEMPLATE_FAMILIES)]
        round_ = i // len(TEMPLATE_FAMILIES)
        names.append(family if round_ == 0 else f"{family}-{round_}")
    return names


class VenueSpike(BaseModel):
    """
    A venue with a daily baseline of visitors and planted event days.

    The cell is given in released coordinates.
    """

    model_config = ConfigDict(frozen=True)

    cell: Tuple[int, int]
    days: List[int] = Field(..., min_length=1, description="Event day indices")
    magnitudes: List[int] = Field(..., min_length=1, description="Extra visitors per event day")
    baseline: int = Field(20, ge=0, description="Visitors on every day")

    @model_validator(mode="after")
    def check_lengths(self) -> "VenueSpike":
        if len(self.days) != len(self.magnitudes):
            raise ValueError("days and magnitudes must have the same length")
        if len(set(self.days)) != len(self.days):
            raise ValueError("event days must be distinct")
        if any(m < 1 for m in self.magnitudes):
            raise ValueError("magnitudes must be >= 1")
        return self


class SynthConfig(BaseModel):
    """
    Parameters of one synthetic release.

    Attributes:
        seed: Master seed; there is no default
        grid: Released grid; rotations need a square grid
        n_templates: Number of candidate cities generated
        template_id: Planted city, one of the generated template names
        cluster: Block size used for the distinguishability checks
        users: Number of users
        day_count: Days in the release
        transform: Planted symmetry applied to the whole release
        start_date: Calendar date of day 0
        calendar: Holiday CSV; None for the bundled Japanese calendar
        commuter_fraction: Share of users with a separate work cell
        noise: Poisson intensity scale of uniform random visits (x4 per user-day)
        observation_rate: Probability a daytime slot is observed
        weekend_home_share: Probability a non-working daytime slot is at home
        favorite_count: Leisure places per user
        spikes: Planted venue events
        center_lat: Latitude of the planted city center
        center_lon: Longitude of the planted city center
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(..., ge=0, description="Master seed")
    grid: GridSpec = Field(default_factory=GridSpec)
    n_templates: int = Field(10, ge=2, le=30, description="Candidate cities")
    template_id: str = Field("monocentric", description="Planted template name")
    cluster: Tuple[int, int] = Field((40, 40), description="Block size for template checks")
    users: int = Field(1000, ge=1, description="Number of users")
    day_count: int = Field(DEFAULT_DAY_COUNT, ge=1, description="Days in the release")
    transform: DihedralTransform = Field(DihedralTransform.IDENTITY)
    start_date: date = Field(date(2019, 9, 15), description="Date of day 0")
    calendar: Optional[str] = Field(None, description="Holiday CSV path")
    commuter_fraction: float = Field(0.8, ge=0.0, le=1.0)
    noise: float = Field(0.0, ge=0.0, description="Poisson noise scale")
    observation_rate: float = Field(0.5, gt=0.0, le=1.0)
    weekend_home_share: float = Field(0.6, ge=0.0, le=1.0)
    favorite_count: int = Field(2, ge=0, le=10)
    spikes: List[VenueSpike] = Field(default_factory=list)
    center_lat: float = Field(35.0, ge=-80, le=80, description="Latitude of the planted city")
    center_lon: float = Field(137.0, ge=-150, le=150, description="Longitude of the planted city")

    @field_validator("transform", mode="before")
    @classmethod
    def parse_transform(cls, value: object) -> object:
        if isinstance(value, str):
            return DihedralTransform.parse(value)
        return value

    @model_validator(mode="after")
    def check_geometry(self) -> "SynthConfig":
        if self.transform.swaps_axes and not self.grid.is_square:
            raise ValueError(f"{self.transform.value} needs a square grid")
        cw, ch = self.cluster
        if cw < 1 or ch < 1 or self.grid.width % cw or self.grid.height % ch:
            raise ValueError(f"cluster {cw}x{ch} must divide the grid {self.grid.label()}")
        if self.template_id not in template_names(self.n_templates):
            raise ValueError(f"unknown template {self.template_id!r}")
        for spike in self.spikes:
            if not self.grid.contains(*spike.cell):
                raise ValueError(f"spike cell {spike.cell} outside the grid")
            if any(not 0 <= d < self.day_count for d in spike.days):
                raise ValueError("spike days outside the release")
        return self

    @property
    def template_index(self) -> int:
        return template_names(self.n_templates).index(self.template_id)
