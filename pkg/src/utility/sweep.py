"""
Privacy-utility sweeps.

One row per (parameter point, repeat): sanitize with seed + repeat, then
evaluate the selected metrics. Rows run in parallel, are cached by a key
over everything they depend on, and a failing row is recorded with its
error instead of stopping the sweep.
"""

import time
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.cache.keys import CacheKeyGenerator
from src.cache.manager import RowCache
from src.exceptions import ToolkitError, ValidationError
from src.models.reports import UtilityReport
from src.sanitizers.base import SanitizationResult
from src.sanitizers.destructure import PermutationConfig, destructure
from src.sanitizers.geoind import GeoIndConfig, geoind_sanitize
from src.sanitizers.grr import GrrConfig, grr_sanitize
from src.spatial.correlation import clustered_correlation
from src.spatial.density import density_field
from src.spatial.matching import DEFAULT_CLUSTER, match_city
from src.spatial.raster import resample_raster
from src.traces.catalogs import PopulationRaster
from src.traces.store import TraceSet
from src.utility.divergence import KL_SMOOTHING, population_kl_over_time
from src.utility.reid import anchor_reid_rate
from src.utils.digests import arrays_sha256
from src.utils.logger import get_logger, log_stage_execution
from src.utils.workers import run_bounded

logger = get_logger(__name__)

Mechanism = Literal["geoind", "grr", "destructure"]

METRIC_COLUMNS: Dict[str, Tuple[str, ...]] = {
    "reid": (
        "reid_rate",
        "reid_within_one",
        "home_error_mean",
        "home_error_median",
        "work_error_mean",
        "work_error_median",
        "reid_excluded_users",
    ),
    "kl": ("kl_mean", "kl_slots"),
    "correlation": ("correlation",),
    "margin": (
        "match_city",
        "match_transform",
        "match_correlation",
        "match_margin",
        "match_city_margin",
    ),
}
PARAMETER_COLUMNS: Dict[str, Tuple[str, ...]] = {
    "geoind": ("epsilon", "level", "radius_m"),
    "grr": ("epsilon",),
    "destructure": ("scope", "identity"),
}


def sanitize(
    ts: TraceSet, mechanism: str, params: Dict[str, Any], seed: int, workers: Optional[int] = None
) -> SanitizationResult:
    """
    Run one mechanism with a parameter point.

    Raises:
        ValidationError: On an unknown mechanism or invalid parameters
    """
    if mechanism == "geoind":
        return geoind_sanitize(ts, GeoIndConfig(**params, seed=seed), workers)
    if mechanism == "grr":
        return grr_sanitize(ts, GrrConfig.for_grid(ts.grid, params["epsilon"], seed), workers)
    if mechanism == "destructure":
        return destructure(ts, PermutationConfig(**params, seed=seed), workers)
    raise ValidationError(f"unknown mechanism {mechanism!r}", field="mechanism")


def _raster_digest(rasters: Sequence[PopulationRaster]) -> List[str]:
    return [f"{r.name}:{arrays_sha256(r.density)}" for r in rasters]


def _evaluate(
    original: TraceSet,
    result: SanitizationResult,
    mechanism: str,
    params: Dict[str, Any],
    seed: int,
    metrics: Sequence[str],
    reference: Optional[PopulationRaster],
    rasters: Sequence[PopulationRaster],
    cluster: Tuple[int, int],
    debias: bool,
) -> Dict[str, Any]:
    sanitized = result.traces
    row: Dict[str, Any] = {}

    if "reid" in metrics:
        reid = anchor_reid_rate(original, sanitized)
        row.update(
            reid_rate=reid.rate,
            reid_within_one=reid.within_one_rate,
            home_error_mean=float(reid.home_errors.mean()),
            home_error_median=float(np.median(reid.home_errors)),
            work_error_mean=float(reid.work_errors.mean()),
            work_error_median=float(np.median(reid.work_errors)),
            reid_excluded_users=reid.excluded_users,
        )

    if "kl" in metrics:
        grr_cfg = (
            GrrConfig.for_grid(original.grid, params["epsilon"], seed)
            if debias and mechanism == "grr"
            else None
        )
        divergence = population_kl_over_time(original, sanitized, grr_cfg)
        row.update(kl_mean=divergence.mean, kl_slots=int(divergence.slots.size))

    field = density_field(sanitized) if ("correlation" in metrics or "margin" in metrics) else None

    if "correlation" in metrics:
        if reference is None:
            raise ValidationError(
                "the correlation metric needs a reference raster", field="reference"
            )
        target = resample_raster(reference, original.grid)
        assert field is not None
        row["correlation"] = clustered_correlation(field, target, cluster)

    if "margin" in metrics:
        if not rasters:
            raise ValidationError("the margin metric needs candidate rasters", field="rasters")
        assert field is not None
        match = match_city(field, rasters, cluster, original.grid, workers=1)
        row.update(
            match_city=match.best_city,
            match_transform=match.best_transform,
            match_correlation=match.best_correlation,
            match_margin=match.margin,
            match_city_margin=match.city_margin,
        )
    return row


def sanitizer_sweep(
    original: TraceSet,
    mechanism: Mechanism,
    points: Sequence[Dict[str, Any]],
    metrics: Sequence[str],
    seed: int,
    repeats: int = 1,
    reference: Optional[PopulationRaster] = None,
    rasters: Sequence[PopulationRaster] = (),
    cluster: Tuple[int, int] = DEFAULT_CLUSTER,
    debias: bool = True,
    cache: Optional[RowCache] = None,
    workers: Optional[int] = None,
) -> UtilityReport:
    """
    Sanitize at every parameter point and evaluate the selected metrics.

    Args:
        original: Unsanitized trajectories
        mechanism: "geoind", "grr" or "destructure"
        points: Parameter points, e.g. [{"epsilon": 0.5}, {"epsilon": 1.0}]
        metrics: Any of "reid", "kl", "correlation", "margin"
        seed: Master seed; repeat i uses seed + i
        repeats: Seeds per point
        reference: Raster for the "correlation" metric
        rasters: Candidate cities for the "margin" metric
        cluster: Block size for correlation and matching
        debias: Debias GRR output before computing KL
        cache: Row cache; cached rows are reused
        workers: Concurrency cap across rows

    Returns:
        UtilityReport with rows sorted by parameter point then seed

    Raises:
        ValidationError: On unknown metrics or mechanism, or repeats < 1

    Example:
        >>> report = sanitizer_sweep(ts, "grr", [{"epsilon": e} for e in (1, 4)], ["kl"], seed=7)
    """
    unknown = sorted(set(metrics) - set(METRIC_COLUMNS))
    if unknown:
        raise ValidationError(f"unknown metrics {unknown}", field="metrics")
    if mechanism not in PARAMETER_COLUMNS:
        raise ValidationError(f"unknown mechanism {mechanism!r}", field="mechanism")
    if repeats < 1:
        raise ValidationError("must be >= 1", field="repeats")

    metrics = [m for m in METRIC_COLUMNS if m in metrics]
    parameter_columns = list(PARAMETER_COLUMNS[mechanism])
    value_columns = [c for m in metrics for c in METRIC_COLUMNS[m]]
    columns = ["mechanism", *parameter_columns, "seed", *value_columns, "error"]
    cache = cache or RowCache(None)

    def point_key(point: Dict[str, Any]) -> Tuple[Tuple[bool, Any], ...]:
        # unset parameters sort last
        return tuple((point.get(c) is None, point.get(c) or 0) for c in parameter_columns)

    ordered = sorted(points, key=point_key)
    tasks = [(point, seed + i) for point in ordered for i in range(repeats)]
    input_digest = original.digest()
    original.build_index()

    def run_row(task: Tuple[Dict[str, Any], int]) -> Dict[str, Any]:
        point, row_seed = task
        key = CacheKeyGenerator.generate(
            "sweep_row",
            {
                "input": input_digest,
                "mechanism": mechanism,
                "point": point,
                "seed": row_seed,
                "metrics": metrics,
                "reference": _raster_digest([reference]) if reference else None,
                "rasters": _raster_digest(rasters),
                "cluster": list(cluster),
                "debias": debias,
            },
        )

        def compute() -> Dict[str, Any]:
            started = time.perf_counter()
            row: Dict[str, Any] = {"mechanism": mechanism, "seed": row_seed, "error": None}
            row.update({c: point.get(c) for c in parameter_columns})
            try:
                result = sanitize(original, mechanism, dict(point), row_seed, workers=1)
                row.update(
                    _evaluate(
                        original, result, mechanism, point, row_seed, metrics,
                        reference, rasters, cluster, debias,
                    )
                )
                log_stage_execution("sweep_row", (time.perf_counter() - started) * 1000)
            except (ToolkitError, ValueError, KeyError, TypeError) as e:
                row["error"] = f"{type(e).__name__}: {e}"
                log_stage_execution(
                    "sweep_row",
                    (time.perf_counter() - started) * 1000,
                    error=str(e),
                    error_type=type(e).__name__,
                    point=point,
                )
            return {c: row.get(c) for c in columns}

        outcome = cache.get_or_compute(key, compute, cache_if=lambda row: row["error"] is None)
        return outcome["data"]

    rows: List[Dict[str, Any]] = run_bounded(run_row, tasks, workers)
    failed = sum(1 for r in rows if r.get("error"))
    logger.info(
        "sanitizer_sweep_completed",
        mechanism=mechanism,
        points=len(ordered),
        rows=len(rows),
        failed_rows=failed,
    )
    return UtilityReport(
        mechanism=mechanism,
        metrics=list(metrics),
        kl_smoothing=KL_SMOOTHING,
        parameter_columns=parameter_columns,
        columns=columns,
        rows=rows,
    )


def summarize_rows(
    report: UtilityReport, value_columns: Optional[List[str]] = None
) -> List[Dict[str, Any]]:
    """
    Mean and 95% normal band per parameter point over seeds.

    Each value column c yields c_mean, c_lo and c_hi, with the band
    mean +/- 1.96 sd / sqrt(n) (zero width for a single seed). Failed rows
    and non-numeric columns are skipped.
    """
    frame = pd.DataFrame(report.rows, columns=report.columns)
    if frame.empty:
        return []
    frame = frame[frame["error"].isna()]
    if value_columns is None:
        value_columns = [
            c
            for c in report.columns
            if c not in (*report.parameter_columns, "mechanism", "seed", "error")
            and pd.api.types.is_numeric_dtype(frame[c])
        ]

    summary: List[Dict[str, Any]] = []
    for point, group in frame.groupby(report.parameter_columns, dropna=False, sort=False):
        values = point if isinstance(point, tuple) else (point,)
        entry: Dict[str, Any] = dict(zip(report.parameter_columns, values))
        entry["n"] = int(len(group))
        for column in value_columns:
            series = pd.to_numeric(group[column], errors="coerce").dropna()
            if series.empty:
                continue
            mean = float(series.mean())
            half = 0.0
            if len(series) > 1:
                half = 1.96 * float(series.std(ddof=1)) / np.sqrt(len(series))
            entry[f"{column}_mean"] = mean
            entry[f"{column}_lo"] = mean - half
            entry[f"{column}_hi"] = mean + half
        summary.append(entry)
    return summary

