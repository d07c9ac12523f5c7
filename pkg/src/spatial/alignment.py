"""
Geographic alignment by steepest-ascent hill climbing.

The center of the working grid is moved over a lattice of ±step moves in
latitude and longitude. At each iteration every 4-neighbor is rasterized
and scored, and the climb moves to the best strictly improving neighbor;
it stops when no neighbor improves.
"""

from typing import Dict, List, Optional, Tuple

from src.exceptions import AlignmentError, CorrelationUndefinedError, ValidationError
from src.models.reports import AlignmentStep, GeoAlignment
from src.spatial.correlation import cell_correlation, clustered_correlation
from src.spatial.density import DensityField
from src.spatial.raster import GeoRasterSampler
from src.traces.grid import GridSpec
from src.utils.logger import get_logger
from src.utils.rng import derive_rng

logger = get_logger(__name__)

DEFAULT_STEP_DEG = 0.01

# Lattice moves in (lat, lon) step units, in tie-break order.
_NEIGHBORS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class _Climber:
    """Scores lattice points around one start, memoizing rasterizations."""

    def __init__(
        self,
        field: DensityField,
        sampler: GeoRasterSampler,
        grid: GridSpec,
        start: Tuple[float, float],
        step: float,
        cluster: Optional[Tuple[int, int]],
    ) -> None:
        self.field = field
        self.sampler = sampler
        self.grid = grid
        self.start = start
        self.step = step
        self.cluster = cluster
        self._scores: Dict[Tuple[int, int], Optional[float]] = {}

    def position(self, point: Tuple[int, int]) -> Tuple[float, float]:
        return self.start[0] + point[0] * self.step, self.start[1] + point[1] * self.step

    def score(self, point: Tuple[int, int]) -> Optional[float]:
        if point not in self._scores:
            lat, lon = self.position(point)
            values = self.sampler.rasterize(lat, lon, self.grid)
            try:
                if self.cluster is not None:
                    value: Optional[float] = clustered_correlation(
                        self.field, values, self.cluster
                    )
                else:
                    value = cell_correlation(self.field, values)
            except CorrelationUndefinedError:
                value = None
            self._scores[point] = value
        return self._scores[point]

    @property
    def evaluations(self) -> int:
        return len(self._scores)

    def climb(self, max_iterations: int) -> Tuple[Tuple[int, int], float, List[AlignmentStep]]:
        point = (0, 0)
        current = self.score(point)
        if current is None:
            lat, lon = self.position(point)
            raise CorrelationUndefinedError(
                f"correlation undefined at start ({lat:.6f}, {lon:.6f})"
            )

        path: List[AlignmentStep] = []
        for _ in range(max_iterations):
            best_point, best_score = point, current
            for d_lat, d_lon in _NEIGHBORS:
                candidate = (point[0] + d_lat, point[1] + d_lon)
                value = self.score(candidate)
                if value is not None and value > best_score:
                    best_point, best_score = candidate, value
            if best_point == point:
                break
            point, current = best_point, best_score
            lat, lon = self.position(point)
            path.append(AlignmentStep(lat=lat, lon=lon, correlation=current))
        else:
            logger.warning("hill_climb_iteration_cap", max_iterations=max_iterations)
        return point, current, path


def hill_climb_align(
    field: DensityField,
    sampler: GeoRasterSampler,
    start: Tuple[float, float],
    step: float = DEFAULT_STEP_DEG,
    grid: Optional[GridSpec] = None,
    cluster: Optional[Tuple[int, int]] = None,
    max_iterations: int = 10_000,
    restarts: int = 0,
    restart_radius: float = 0.1,
    seed: Optional[int] = None,
) -> GeoAlignment:
    """
    Refine the geographic center of the working grid.

    Args:
        field: Released density field, already in the matched orientation
        sampler: Rasterizes the population source at candidate centers
        start: Initial (lat, lon)
        step: Move size in degrees
        grid: Working grid geometry (default: field shape, 500 m cells)
        cluster: Use the block objective instead of grid-level Spearman
        max_iterations: Cap on accepted moves
        restarts: Extra climbs from seeded random starts around ``start``
        restart_radius: Half-width in degrees of the restart box
        seed: Master seed; required when restarts > 0

    Returns:
        GeoAlignment of the best climb; its path lists accepted moves

    Raises:
        ValidationError: On non-positive step or missing seed for restarts
        AlignmentError: If the sampler cannot rasterize a candidate center
        CorrelationUndefinedError: If the score at the start is undefined

    A restart whose climb fails either way is skipped with a warning.

    Example:
        >>> alignment = hill_climb_align(field, sampler, start=(35.05, 136.96))
        >>> alignment.iterations
        3
    """
    if step <= 0:
        raise ValidationError("must be > 0", field="step")
    if restarts < 0:
        raise ValidationError("must be >= 0", field="restarts")
    if restarts and seed is None:
        raise ValidationError("a seed is required for random restarts", field="seed")
    if grid is None:
        width, height = field.shape
        grid = GridSpec(width=width, height=height)

    starts = [start]
    for r in range(restarts):
        rng = derive_rng(seed, "hill_climb", r)  # type: ignore[arg-type]
        offset = rng.uniform(-restart_radius, restart_radius, size=2)
        starts.append((start[0] + float(offset[0]), start[1] + float(offset[1])))

    best: Optional[GeoAlignment] = None
    initial: Optional[float] = None
    evaluations = 0
    for index, origin in enumerate(starts):
        climber = _Climber(field, sampler, grid, origin, step, cluster)
        try:
            point, score, path = climber.climb(max_iterations)
        except (AlignmentError, CorrelationUndefinedError) as e:
            if index == 0:
                raise
            evaluations += climber.evaluations
            logger.warning(
                "hill_climb_restart_skipped",
                restart=index,
                start=origin,
                error=str(e),
                error_type=type(e).__name__,
            )
            continue
        evaluations += climber.evaluations
        if initial is None:
            initial = climber.score((0, 0))
        lat, lon = climber.position(point)
        logger.debug("hill_climb_finished", start=origin, lat=lat, lon=lon, correlation=score)
        if best is None or score > best.correlation:
            best = GeoAlignment(
                center_lat=lat,
                center_lon=lon,
                correlation=score,
                initial_correlation=initial,  # type: ignore[arg-type]
                iterations=len(path),
                evaluations=1,
                step_deg=step,
                restarts=restarts,
                path=path,
            )

    assert best is not None
    result = best.model_copy(update={"evaluations": evaluations})
    logger.info(
        "hill_climb_completed",
        center_lat=round(result.center_lat, 6),
        center_lon=round(result.center_lon, 6),
        correlation=round(result.correlation, 6),
        iterations=result.iterations,
        evaluations=evaluations,
    )
    return result
