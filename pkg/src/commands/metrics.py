"""metrics: evaluate any subset of the five re-identification risk metrics."""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import Field, model_validator

from src.commands.artifacts import ArtifactWriter
from src.commands.base import SeededOptions, arg, command, require_file
from src.metrics.anchors import anchor_uniqueness
from src.metrics.queries import DELTA_GRID, K_THRESHOLDS, k_anonymity_risk
from src.metrics.seclusion import seclusion_exposure
from src.metrics.sensitive import sensitive_uniqueness
from src.metrics.unicity import unicity_curve
from src.models.reports import RiskReport
from src.traces.catalogs import load_pois
from src.traces.store import TraceSet, load_traceset
from src.utils.logger import get_logger

logger = get_logger(__name__)

Metric = Literal["kanon", "unicity", "anchors", "seclusion", "sensitive"]
METRICS = ("kanon", "unicity", "anchors", "seclusion", "sensitive")


class MetricsInput(SeededOptions):
    """Inputs of metrics; parameter grids default to the usual report values."""

    traces: Path = Field(..., description="Trace CSV")
    pois: Optional[Path] = Field(None, description="POI CSV for the sensitive metric")
    keywords: List[str] = Field(default_factory=list, description="Sensitivity keywords")
    metrics: List[Metric] = Field(default_factory=list, description="Metrics to run")
    ms: List[int] = Field([1, 2, 3, 4, 5], min_length=1, description="Points per query")
    deltas: List[int] = Field(list(DELTA_GRID), min_length=1, description="Time slack in bins")
    thresholds: List[int] = Field(list(K_THRESHOLDS), min_length=1)
    trials: int = Field(1000, ge=1)
    kappas: List[int] = Field([1, 3, 10], min_length=1)
    rs: List[int] = Field([0, 1, 2, 3, 4], min_length=1)
    qs: List[int] = Field([1, 2, 3], min_length=1)

    @model_validator(mode="after")
    def resolve_metrics(self) -> "MetricsInput":
        if not self.metrics:
            default = [m for m in METRICS if m != "sensitive" or self.pois is not None]
            self.metrics = default  # type: ignore[assignment]
        if "sensitive" in self.metrics and self.pois is None:
            raise ValueError("the sensitive metric needs --pois")
        if any(v < 1 for v in [*self.ms, *self.thresholds, *self.kappas, *self.qs]):
            raise ValueError("m, threshold, kappa and q values must be >= 1")
        if any(v < 0 for v in [*self.deltas, *self.rs]):
            raise ValueError("delta and r values must be >= 0")
        return self


def _kanon(ts: TraceSet, params: MetricsInput) -> RiskReport:
    rows = [
        k_anonymity_risk(
            ts, m, delta, params.trials, params.seed, params.thresholds, params.workers
        ).as_row()
        for m in sorted(set(params.ms))
        for delta in sorted(set(params.deltas))
    ]
    return RiskReport(
        metric="kanon",
        parameters={"ms": params.ms, "deltas": params.deltas, "trials": params.trials},
        rows=rows,
        seed=params.seed,
        notes=["constraints of one query share a day; bins are widened by delta"],
    )


def _unicity(ts: TraceSet, params: MetricsInput) -> RiskReport:
    curve = unicity_curve(ts, sorted(set(params.ms)), params.trials, params.seed, params.workers)
    return RiskReport(
        metric="unicity",
        parameters={"ms": params.ms, "trials": params.trials},
        rows=curve.as_rows(),
        seed=params.seed,
    )


def _anchors(ts: TraceSet, params: MetricsInput) -> RiskReport:
    result = anchor_uniqueness(ts, sorted(set(params.rs)))
    return RiskReport(
        metric="anchors",
        parameters={"rs": params.rs},
        rows=[{"r": r, "pr_unique": p} for r, p in sorted(result.unique_by_r.items())],
        extras={
            "eligible_users": int(result.users.size),
            "excluded_users": result.excluded_users,
            "ua_hw": result.ua_hw,
            "share_k_hw_le_5": result.share_k_hw_le_5,
            "share_shared_pairs_le_3": result.share_shared_pairs_le_3,
            "pair_histogram": {str(k): v for k, v in sorted(result.pair_histogram.items())},
        },
    )


def _seclusion(ts: TraceSet, params: MetricsInput) -> RiskReport:
    return RiskReport(
        metric="seclusion",
        parameters={"kappas": params.kappas},
        rows=[seclusion_exposure(ts, kappa).as_row() for kappa in sorted(set(params.kappas))],
    )


def _sensitive(ts: TraceSet, params: MetricsInput) -> RiskReport:
    assert params.pois is not None
    catalog = load_pois(require_file(params.pois, "pois"), ts.grid, params.keywords or None)
    rows = [sensitive_uniqueness(ts, catalog, q).as_row() for q in sorted(set(params.qs))]
    notes = [] if any(r["applicable"] for r in rows) else ["no user visits a sensitive cell"]
    return RiskReport(
        metric="sensitive",
        parameters={"qs": params.qs, "keywords": list(catalog.keywords)},
        rows=rows,
        notes=notes,
    )


_RUNNERS = {
    "kanon": _kanon,
    "unicity": _unicity,
    "anchors": _anchors,
    "seclusion": _seclusion,
    "sensitive": _sensitive,
}


@command(
    "metrics",
    MetricsInput,
    "Compute re-identification risk metrics",
    arguments=(
        arg("--traces", required=True),
        arg("--pois"),
        arg("--keywords", nargs="+"),
        arg("--metrics", nargs="+", choices=list(METRICS)),
        arg("--ms", nargs="+", type=int),
        arg("--deltas", nargs="+", type=int),
        arg("--thresholds", nargs="+", type=int),
        arg("--trials", type=int),
        arg("--kappas", nargs="+", type=int),
        arg("--rs", nargs="+", type=int),
        arg("--qs", nargs="+", type=int),
    ),
)
def metrics(params: MetricsInput, writer: ArtifactWriter) -> None:
    """Write <metric>.json and <metric>.csv for every selected metric."""
    ts = load_traceset(require_file(params.traces, "traces"), params.grid_spec, params.day_count)
    ts.build_index()
    summary: Dict[str, Any] = {}
    for name in [m for m in METRICS if m in params.metrics]:
        report = _RUNNERS[name](ts, params)
        writer.json(f"{name}.json", report)
        writer.csv(f"{name}.csv", report.rows)
        summary[name] = len(report.rows)
    logger.info("metrics_completed", reports=summary)
