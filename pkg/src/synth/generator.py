"""
Synthetic trajectories with planted ground truth.

Users live in a template city: home, work and a few favorite places are
drawn in proportion to the template density. Working days follow a
commute routine, non-working days a flatter leisure routine, and the
finished release is moved by the planted symmetry. The GroundTruth sidecar
records every planted quantity in released coordinates.
"""

from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import CalendarCoverageError, InfeasibleConfigError
from src.models.reports import GroundTruth
from src.spatial.transforms import inverse, transform_cells
from src.synth.config import SynthConfig
from src.synth.templates import gen_city_rasters
from src.temporal.profiles import WORK_BINS
from src.traces.catalogs import HolidayCalendar, PopulationRaster, load_holidays
from src.traces.store import BINS_PER_DAY, TraceSet
from src.utils.logger import get_logger
from src.utils.rng import derive_rng
from src.utils.workers import run_bounded

logger = get_logger(__name__)

NIGHT_BINS = slice(0, 12)
COMMUTE_BINS = (14, 15, 16, 17, 34, 35, 36, 37)
LEISURE_BINS = slice(16, 44)
EVENING_BINS = slice(36, 44)
EVENING_OUTING_RATE = 0.2
NOISE_VISITS_PER_DAY = 4

_WORK = np.array(WORK_BINS)


def _day_types(cfg: SynthConfig, calendar: HolidayCalendar) -> Tuple[np.ndarray, List[int]]:
    """Working-day mask and the weekday holidays of the release."""
    end = cfg.start_date + timedelta(days=cfg.day_count - 1)
    if not calendar.covers(cfg.start_date, end):
        raise CalendarCoverageError(
            f"calendar covers {calendar.coverage_start}..{calendar.coverage_end}, "
            f"release spans {cfg.start_date}..{end}",
            field="start_date",
        )
    working = np.zeros(cfg.day_count, dtype=bool)
    holidays: List[int] = []
    for d in range(cfg.day_count):
        day: date = cfg.start_date + timedelta(days=d)
        if day.weekday() >= 5:
            continue
        if calendar.is_holiday(day):
            holidays.append(d)
        else:
            working[d] = True
    if not working.any():
        raise InfeasibleConfigError("the release has no working day", field="start_date")
    return working, holidays


def _observation_rates(rate: float) -> Tuple[np.ndarray, np.ndarray]:
    """Per-bin observation probability on (working, non-working) days."""
    base = np.full(BINS_PER_DAY, rate)
    base[NIGHT_BINS] = rate / 2
    busy = base.copy()
    busy[list(COMMUTE_BINS)] = min(1.0, 2 * rate)
    return busy, base


@dataclass
class _UserPlan:
    """Anchors and the (day, bin) -> cell plan of one user, in template coordinates."""

    home: int
    work: int
    loc: np.ndarray
    observed: np.ndarray


def _plan_user(
    cfg: SynthConfig, user: int, prob: np.ndarray, working: np.ndarray, rates: np.ndarray
) -> _UserPlan:
    rng = derive_rng(cfg.seed, "user", user)
    n_cells = prob.size
    busy_days = np.flatnonzero(working)
    free_days = np.flatnonzero(~working)

    home = int(rng.choice(n_cells, p=prob))
    commuter = bool(rng.random() < cfg.commuter_fraction)
    work = int(rng.choice(n_cells, p=prob)) if commuter else home
    favorites = rng.choice(n_cells, size=cfg.favorite_count, p=prob)

    loc = np.full((cfg.day_count, BINS_PER_DAY), home, dtype=np.int32)
    if commuter:
        loc[np.ix_(busy_days, _WORK)] = work
    if favorites.size:
        evening = loc[busy_days, EVENING_BINS]
        outing = rng.random(evening.shape) < EVENING_OUTING_RATE
        loc[busy_days, EVENING_BINS] = np.where(
            outing, rng.choice(favorites, size=evening.shape), evening
        )
        leisure = loc[free_days, LEISURE_BINS]
        away = rng.random(leisure.shape) >= cfg.weekend_home_share
        loc[free_days, LEISURE_BINS] = np.where(
            away, rng.choice(favorites, size=leisure.shape), home
        )

    observed = rng.random(loc.shape) < rates

    if cfg.noise > 0:
        visits = rng.poisson(cfg.noise * NOISE_VISITS_PER_DAY, size=cfg.day_count)
        for d in np.flatnonzero(visits):
            k = min(int(visits[d]), BINS_PER_DAY)
            bins = rng.choice(BINS_PER_DAY, size=k, replace=False)
            loc[d, bins] = rng.integers(0, n_cells, size=k)
            observed[d, bins] = True

    return _UserPlan(home, work, loc, observed)


def _plant_spikes(cfg: SynthConfig, loc: np.ndarray, observed: np.ndarray) -> None:
    width, height = cfg.grid.width, cfg.grid.height
    back = inverse(cfg.transform)
    for i, spike in enumerate(cfg.spikes):
        rng = derive_rng(cfg.seed, "venue", i)
        vx, vy = transform_cells(
            np.array([spike.cell[0]]), np.array([spike.cell[1]]), back, width, height
        )
        venue = int(vy[0]) * width + int(vx[0])
        extra = dict(zip(spike.days, spike.magnitudes))
        for d in range(cfg.day_count):
            count = min(cfg.users, spike.baseline + extra.get(d, 0))
            visitors = rng.choice(cfg.users, size=count, replace=False)
            bins = rng.integers(EVENING_BINS.start, EVENING_BINS.stop, size=count)
            loc[visitors, d, bins] = venue
            observed[visitors, d, bins] = True


def _released(cfg: SynthConfig, cells: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    width = cfg.grid.width
    return transform_cells(cells % width, cells // width, cfg.transform, width, cfg.grid.height)


def gen_traces(
    cfg: SynthConfig,
    rasters: Optional[Sequence[PopulationRaster]] = None,
    workers: Optional[int] = None,
) -> Tuple[TraceSet, GroundTruth]:
    """
    Generate a planted release.

    Args:
        cfg: Synthetic configuration
        rasters: Output of gen_city_rasters(cfg), to avoid redrawing templates
        workers: Concurrency cap for per-user generation

    Returns:
        (released TraceSet, GroundTruth in released coordinates)

    Raises:
        CalendarCoverageError: If the calendar does not cover the release
        InfeasibleConfigError: If the release has no working day
        TemplateIndistinguishableError: If the templates cannot be separated

    Example:
        >>> cfg = SynthConfig(seed=3, grid=GridSpec.parse("40x40"), cluster=(8, 8), users=50)
        >>> ts, truth = gen_traces(cfg)
        >>> truth.start_date.isoformat()
        '2019-09-15'
    """
    calendar = load_holidays(cfg.calendar)
    working, holidays = _day_types(cfg, calendar)
    if rasters is None:
        rasters = gen_city_rasters(cfg)
    city = rasters[cfg.template_index]

    # template density flattened as y * W + x
    density = np.asarray(city.density, dtype=np.float64).T.ravel()
    prob = density / density.sum()
    busy, free = _observation_rates(cfg.observation_rate)
    rates = np.where(working[:, None], busy[None, :], free[None, :])

    plans = run_bounded(
        lambda user: _plan_user(cfg, user, prob, working, rates), range(cfg.users), workers
    )
    loc = np.stack([p.loc for p in plans])
    observed = np.stack([p.observed for p in plans])
    _plant_spikes(cfg, loc, observed)

    users, days, bins = np.nonzero(observed)
    xs, ys = _released(cfg, loc[users, days, bins].astype(np.int64))
    traces = TraceSet(
        cfg.grid, users, days, bins, xs, ys, day_count=cfg.day_count, presorted=True
    )

    homes_x, homes_y = _released(cfg, np.array([p.home for p in plans], dtype=np.int64))
    works_x, works_y = _released(cfg, np.array([p.work for p in plans], dtype=np.int64))
    present = set(int(u) for u in traces.user_ids)
    truth = GroundTruth(
        template_id=cfg.template_id,
        transform=cfg.transform.value,
        recovery_transform=inverse(cfg.transform).value,
        start_date=cfg.start_date,
        weekday_of_day0=cfg.start_date.weekday(),
        holiday_days=holidays,
        working_days=[int(d) for d in np.flatnonzero(working)],
        homes={
            u: [int(homes_x[u]), int(homes_y[u])] for u in range(cfg.users) if u in present
        },
        works={
            u: [int(works_x[u]), int(works_y[u])] for u in range(cfg.users) if u in present
        },
        spike_days={f"{s.cell[0]},{s.cell[1]}": sorted(s.days) for s in cfg.spikes},
        center_lat=city.center_lat,
        center_lon=city.center_lon,
        config=cfg.model_dump(mode="json"),
    )
    logger.info(
        "synthetic_traces_generated",
        template=cfg.template_id,
        transform=cfg.transform.value,
        users=traces.n_users,
        samples=traces.n_samples,
        holidays=len(holidays),
    )
    return traces, truth


def write_ground_truth(truth: GroundTruth, path: Path | str) -> Path:
    """Write the GroundTruth sidecar as indented JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(truth.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("ground_truth_written", path=str(path))
    return path


def load_ground_truth(path: Path | str) -> GroundTruth:
    return GroundTruth.model_validate_json(Path(path).read_text(encoding="utf-8"))
