"""sanitize: apply one sanitization mechanism to a release."""

from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import Field, model_validator

from src.commands.artifacts import ArtifactWriter
from src.commands.base import SeededOptions, arg, command, require_file
from src.traces.store import load_traceset
from src.utility.sweep import sanitize as run_mechanism
from src.utils.logger import get_logger

logger = get_logger(__name__)


class SanitizeInput(SeededOptions):
    """
    Inputs of sanitize.

    geoind takes epsilon (per meter) or both level and radius_m; grr takes
    epsilon; destructure takes scope and identity. There is no default
    privacy level.
    """

    traces: Path = Field(..., description="Trace CSV")
    mechanism: Literal["geoind", "grr", "destructure"]
    epsilon: Optional[float] = Field(None, gt=0)
    level: Optional[float] = Field(None, gt=0)
    radius_m: Optional[float] = Field(None, gt=0)
    scope: Literal["grid", "visited"] = Field("grid")
    identity: bool = Field(False)

    @model_validator(mode="after")
    def check_mechanism_params(self) -> "SanitizeInput":
        if self.mechanism == "grr" and self.epsilon is None:
            raise ValueError("grr needs --epsilon")
        if self.mechanism == "geoind":
            pair = self.level is not None and self.radius_m is not None
            if (self.epsilon is None) == (not pair):
                raise ValueError("geoind needs --epsilon or both --level and --radius-m")
        return self

    def mechanism_params(self) -> Dict[str, Any]:
        if self.mechanism == "geoind":
            if self.epsilon is not None:
                return {"epsilon": self.epsilon}
            return {"level": self.level, "radius_m": self.radius_m}
        if self.mechanism == "grr":
            return {"epsilon": self.epsilon}
        return {"scope": self.scope, "identity": self.identity}


@command(
    "sanitize",
    SanitizeInput,
    "Sanitize a release with geoind, grr or destructure",
    arguments=(
        arg("--traces", required=True),
        arg("--mechanism", required=True, choices=["geoind", "grr", "destructure"]),
        arg("--epsilon", type=float),
        arg("--level", type=float),
        arg("--radius-m", type=float),
        arg("--scope", choices=["grid", "visited"]),
        arg("--identity", action="store_true"),
    ),
)
def sanitize(params: SanitizeInput, writer: ArtifactWriter) -> None:
    """Write sanitized.csv and provenance.json."""
    ts = load_traceset(require_file(params.traces, "traces"), params.grid_spec, params.day_count)
    result = run_mechanism(
        ts, params.mechanism, params.mechanism_params(), params.seed, params.workers
    )
    writer.traces("sanitized.csv", result.traces)
    writer.json("provenance.json", result.provenance)
    logger.info(
        "sanitize_completed",
        mechanism=params.mechanism,
        users=result.traces.n_users,
        samples=result.traces.n_samples,
        counters=result.provenance.counters,
    )
