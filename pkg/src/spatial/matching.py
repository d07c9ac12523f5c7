"""
City matching: search the 8 transforms x candidate cities for the best
structural agreement between a released density field and population
rasters.
"""

from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import CorrelationUndefinedError, ValidationError
from src.models.reports import MatchResult, ScoreEntry
from src.spatial.correlation import cell_correlation, clustered_correlation
from src.spatial.density import DensityField, DensityMode, apply_transform, density_field
from src.spatial.raster import resample_raster
from src.spatial.transforms import DihedralTransform
from src.traces.catalogs import PopulationRaster
from src.traces.grid import GridSpec
from src.traces.store import TraceSet
from src.utils.logger import get_logger
from src.utils.workers import run_bounded

logger = get_logger(__name__)

DEFAULT_CLUSTER = (40, 40)


def _defined_or_none(func: Callable[..., float], *args: Any) -> Optional[float]:
    try:
        return float(func(*args))
    except CorrelationUndefinedError:
        return None


def _score_city(
    raster: PopulationRaster,
    variants: List[Tuple[DihedralTransform, DensityField]],
    cluster: Tuple[int, int],
) -> List[ScoreEntry]:
    entries = []
    for transform, variant in variants:
        entries.append(
            ScoreEntry(
                city=raster.name,
                transform=transform.value,
                transform_index=transform.index,
                correlation=_defined_or_none(
                    clustered_correlation, variant, raster.density, cluster
                ),
                cell_correlation=_defined_or_none(cell_correlation, variant, raster.density),
            )
        )
    return entries


def match_city(
    field: DensityField,
    rasters: Sequence[PopulationRaster],
    cluster: Tuple[int, int] = DEFAULT_CLUSTER,
    grid: Optional[GridSpec] = None,
    workers: Optional[int] = None,
) -> MatchResult:
    """
    Find the (city, transform) pair whose raster best matches field.

    Every raster is resampled onto the working grid, every transform of
    field is scored against it by clustered Spearman correlation, and the
    argmax is returned with its margins. Undefined scores are kept in the
    table as None and excluded from the argmax. Ties break on
    (city label, transform index).

    Args:
        field: Released density field
        rasters: Candidate cities (at least one)
        cluster: Block size for clustered correlation
        grid: Working grid geometry (default: field shape, 500 m cells)
        workers: Concurrency cap for per-city scoring

    Returns:
        MatchResult; best_transform maps the released field onto best_city

    Raises:
        ValidationError: If rasters is empty or cluster does not divide the grid
        TransformError: If field is not square
        CorrelationUndefinedError: If every score is undefined
    """
    if not rasters:
        raise ValidationError("at least one raster is required", field="rasters")
    labels = [r.name for r in rasters]
    if len(set(labels)) != len(labels):
        raise ValidationError(f"duplicate city labels in {labels}", field="rasters")

    width, height = field.shape
    if grid is None:
        grid = GridSpec(width=width, height=height)
    elif (grid.width, grid.height) != (width, height):
        raise ValidationError(
            f"grid {grid.label()} does not match field {width}x{height}", field="grid"
        )
    if width % cluster[0] or height % cluster[1]:
        raise ValidationError(
            f"cluster {cluster[0]}x{cluster[1]} does not divide field {width}x{height}",
            field="cluster",
        )

    variants = [(t, apply_transform(field, t)) for t in DihedralTransform]
    resampled = [resample_raster(r, grid) for r in rasters]

    per_city = run_bounded(lambda r: _score_city(r, variants, cluster), resampled, workers)
    scores = [entry for entries in per_city for entry in entries]

    defined = [s for s in scores if s.correlation is not None]
    if not defined:
        raise CorrelationUndefinedError("every (transform, city) score is undefined")

    ranked = sorted(defined, key=lambda s: (-s.correlation, s.city, s.transform_index))
    best = ranked[0]
    margin = best.correlation - ranked[1].correlation if len(ranked) > 1 else None
    others = [s.correlation for s in defined if s.city != best.city]
    city_margin = best.correlation - max(others) if others else None

    result = MatchResult(
        best_city=best.city,
        best_transform=best.transform,
        best_correlation=best.correlation,
        margin=margin,
        city_margin=city_margin,
        cluster=list(cluster),
        scores=sorted(scores, key=lambda s: (s.city, s.transform_index)),
    )
    logger.info(
        "match_city_completed",
        best_city=result.best_city,
        best_transform=result.best_transform,
        best_correlation=round(result.best_correlation, 6),
        margin=result.margin,
        undefined=len(scores) - len(defined),
    )
    return result


def match_days(
    ts: TraceSet,
    rasters: Sequence[PopulationRaster],
    days: Sequence[int],
    cluster: Tuple[int, int] = DEFAULT_CLUSTER,
    mode: DensityMode = "visits",
    workers: Optional[int] = None,
) -> Dict[int, MatchResult]:
    """
    Run match_city on single-day density fields.

    Days whose every score is undefined (for example a day with no
    samples) are left out of the returned mapping.
    """
    results: Dict[int, MatchResult] = {}
    for day in days:
        field = density_field(ts, days=(int(day), int(day) + 1), mode=mode)
        if not np.any(field.values):
            logger.warning("match_day_skipped", day=int(day), reason="no samples")
            continue
        try:
            results[int(day)] = match_city(field, rasters, cluster, ts.grid, workers)
        except CorrelationUndefinedError as e:
            logger.warning("match_day_skipped", day=int(day), reason=str(e))
    return results
