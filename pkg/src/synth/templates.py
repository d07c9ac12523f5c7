"""
Parametric city templates.

A template is a small set of density components (anisotropic Gaussians and
skewed rings, optionally cut by a coastline) drawn from seeded parameters.
Coordinates are measured from the city center in units of half the grid
side, so the same template can be evaluated on the working grid or on a
wider region around it.
"""

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit

from src.exceptions import (
    CorrelationUndefinedError,
    TemplateIndistinguishableError,
    ValidationError,
)
from src.spatial.correlation import clustered_correlation
from src.spatial.transforms import DihedralTransform, transform_array
from src.synth.config import TEMPLATE_FAMILIES, SynthConfig, template_names
from src.traces.catalogs import PopulationRaster
from src.traces.grid import GridSpec
from src.utils.logger import get_logger
from src.utils.rng import derive_rng

logger = get_logger(__name__)

MAX_ATTEMPTS = 200
SELF_CORRELATION_LIMIT = 0.9
PAIR_CORRELATION_LIMIT = 0.8
CITY_SPACING_DEG = 1.0
POPULATION_SCALE = 1000.0
FLOOR = 1e-3

Component = Dict[str, Any]


@dataclass(frozen=True)
class TemplateSpec:
    """Drawn parameters of one template."""

    name: str
    family: str
    components: Tuple[Component, ...]
    coast: Optional[Dict[str, float]] = None
    attempt: int = 0

    def evaluate(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        total = np.full(np.broadcast(u, v).shape, FLOOR, dtype=np.float64)
        for component in self.components:
            total += _COMPONENTS[component["kind"]](u, v, component)
        if self.coast is not None:
            c = self.coast
            side = u * math.cos(c["angle"]) + v * math.sin(c["angle"]) - c["offset"]
            total = FLOOR + (total - FLOOR) * expit(side / c["softness"])
        return total


def _gaussian(u: np.ndarray, v: np.ndarray, c: Component) -> np.ndarray:
    du, dv = u - c["cx"], v - c["cy"]
    cos, sin = math.cos(c["theta"]), math.sin(c["theta"])
    along = du * cos + dv * sin
    across = -du * sin + dv * cos
    return c["weight"] * np.exp(-0.5 * ((along / c["sx"]) ** 2 + (across / c["sy"]) ** 2))


def _ring(u: np.ndarray, v: np.ndarray, c: Component) -> np.ndarray:
    du, dv = u - c["cx"], v - c["cy"]
    radius = np.hypot(du, dv)
    angle = np.arctan2(dv, du)
    band = np.exp(-0.5 * ((radius - c["radius"]) / c["width"]) ** 2)
    return c["weight"] * band * (1.0 + c["skew"] * np.cos(angle - c["phase"]))


_COMPONENTS: Dict[str, Callable[[np.ndarray, np.ndarray, Component], np.ndarray]] = {
    "gaussian": _gaussian,
    "ring": _ring,
}


# ----------------------------------------------------------------------
# families


def _point(rng: np.random.Generator, lo: float, hi: float) -> Tuple[float, float]:
    radius = rng.uniform(lo, hi)
    angle = rng.uniform(0, 2 * math.pi)
    return radius * math.cos(angle), radius * math.sin(angle)


def _blob(
    cx: float, cy: float, sx: float, sy: float, theta: float, weight: float
) -> Component:
    return {
        "kind": "gaussian",
        "cx": cx,
        "cy": cy,
        "sx": sx,
        "sy": sy,
        "theta": theta,
        "weight": weight,
    }


def _band(
    cx: float, cy: float, radius: float, width: float, skew: float, phase: float, weight: float
) -> Component:
    return {
        "kind": "ring",
        "cx": cx,
        "cy": cy,
        "radius": radius,
        "width": width,
        "skew": skew,
        "phase": phase,
        "weight": weight,
    }


def _monocentric(rng: np.random.Generator) -> Tuple[List[Component], Optional[Dict[str, float]]]:
    cx, cy = _point(rng, 0.15, 0.5)
    sx = rng.uniform(0.25, 0.45)
    core = _blob(cx, cy, sx, sx / rng.uniform(1.5, 2.5), rng.uniform(0, math.pi), 1.0)
    sx2 = rng.uniform(0.1, 0.2)
    satellite = _blob(*_point(rng, 0.4, 0.8), sx2, sx2, 0.0, rng.uniform(0.15, 0.35))
    return [core, satellite], None


def _dual_core(rng: np.random.Generator) -> Tuple[List[Component], Optional[Dict[str, float]]]:
    ax, ay = _point(rng, 0.25, 0.6)
    turn = rng.uniform(-0.8, 0.8)
    scale = rng.uniform(0.6, 1.2)
    bx = -scale * (ax * math.cos(turn) - ay * math.sin(turn))
    by = -scale * (ax * math.sin(turn) + ay * math.cos(turn))
    components = [
        _blob(ax, ay, rng.uniform(0.15, 0.3), rng.uniform(0.15, 0.3), rng.uniform(0, math.pi), 1.0),
        _blob(
            bx,
            by,
            rng.uniform(0.1, 0.25),
            rng.uniform(0.1, 0.25),
            rng.uniform(0, math.pi),
            rng.uniform(0.4, 0.7),
        ),
    ]
    return components, None


def _corridor(rng: np.random.Generator) -> Tuple[List[Component], Optional[Dict[str, float]]]:
    hx, hy = _point(rng, 0.0, 0.4)
    theta = rng.uniform(0, math.pi)
    shift = rng.uniform(0.2, 0.5)
    hub_size = rng.uniform(0.12, 0.2)
    components = [
        _blob(hx, hy, rng.uniform(0.6, 1.0), rng.uniform(0.06, 0.12), theta, 0.8),
        _blob(
            hx + shift * math.cos(theta),
            hy + shift * math.sin(theta),
            hub_size,
            hub_size,
            0.0,
            rng.uniform(0.5, 1.0),
        ),
    ]
    return components, None


def _ring_city(rng: np.random.Generator) -> Tuple[List[Component], Optional[Dict[str, float]]]:
    cx, cy = _point(rng, 0.1, 0.35)
    core = rng.uniform(0.08, 0.14)
    components = [
        _band(
            cx,
            cy,
            rng.uniform(0.35, 0.6),
            rng.uniform(0.06, 0.12),
            rng.uniform(0.3, 0.6),
            rng.uniform(0, 2 * math.pi),
            1.0,
        ),
        _blob(cx, cy, core, core, 0.0, rng.uniform(0.3, 0.6)),
    ]
    return components, None


def _polycentric(rng: np.random.Generator) -> Tuple[List[Component], Optional[Dict[str, float]]]:
    components = []
    for _ in range(int(rng.integers(4, 7))):
        size = rng.uniform(0.08, 0.18)
        components.append(
            _blob(
                *_point(rng, 0.1, 0.85),
                size,
                size * rng.uniform(0.7, 1.0),
                rng.uniform(0, math.pi),
                rng.uniform(0.3, 1.0),
            )
        )
    return components, None


def _coastal(rng: np.random.Generator) -> Tuple[List[Component], Optional[Dict[str, float]]]:
    angle = rng.uniform(0, 2 * math.pi)
    offset = rng.uniform(-0.3, 0.3)
    nx, ny = math.cos(angle), math.sin(angle)
    tx, ty = -ny, nx
    slide = rng.uniform(-0.4, 0.4)
    depth = offset + rng.uniform(0.1, 0.2)
    tangent = math.atan2(ty, tx)
    components = [
        _blob(
            depth * nx + slide * tx,
            depth * ny + slide * ty,
            rng.uniform(0.25, 0.45),
            rng.uniform(0.1, 0.2),
            tangent,
            1.0,
        ),
        _blob(
            (offset + 0.08) * nx,
            (offset + 0.08) * ny,
            1.0,
            0.05,
            tangent,
            rng.uniform(0.3, 0.5),
        ),
    ]
    coast = {"angle": angle, "offset": offset, "softness": 0.05}
    return components, coast


def _radial(rng: np.random.Generator) -> Tuple[List[Component], Optional[Dict[str, float]]]:
    hx, hy = _point(rng, 0.1, 0.4)
    hub = rng.uniform(0.12, 0.2)
    components = [_blob(hx, hy, hub, hub, 0.0, 1.0)]
    rays = int(rng.integers(3, 6))
    base = rng.uniform(0, 2 * math.pi)
    for k in range(rays):
        alpha = base + 2 * math.pi * k / rays + rng.uniform(-0.3, 0.3)
        length = rng.uniform(0.4, 0.8)
        components.append(
            _blob(
                hx + 0.5 * length * math.cos(alpha),
                hy + 0.5 * length * math.sin(alpha),
                0.5 * length,
                rng.uniform(0.03, 0.06),
                alpha,
                rng.uniform(0.3, 0.6),
            )
        )
    return components, None


def _crescent(rng: np.random.Generator) -> Tuple[List[Component], Optional[Dict[str, float]]]:
    cx, cy = _point(rng, 0.1, 0.4)
    band = _band(
        cx,
        cy,
        rng.uniform(0.3, 0.5),
        rng.uniform(0.08, 0.15),
        rng.uniform(0.85, 1.0),
        rng.uniform(0, 2 * math.pi),
        1.0,
    )
    return [band], None


def _cross(rng: np.random.Generator) -> Tuple[List[Component], Optional[Dict[str, float]]]:
    cx, cy = _point(rng, 0.15, 0.5)
    theta = rng.uniform(0, math.pi)
    components = []
    for weight, angle in (
        (1.0, theta),
        (rng.uniform(0.4, 0.7), theta + math.pi / 2 + rng.uniform(-0.3, 0.3)),
    ):
        slide = rng.uniform(-0.3, 0.3)
        components.append(
            _blob(
                cx + slide * math.cos(angle),
                cy + slide * math.sin(angle),
                rng.uniform(0.5, 0.9),
                rng.uniform(0.04, 0.08),
                angle,
                weight,
            )
        )
    return components, None


def _scatter(rng: np.random.Generator) -> Tuple[List[Component], Optional[Dict[str, float]]]:
    components = []
    for _ in range(int(rng.integers(8, 13))):
        size = rng.uniform(0.04, 0.1)
        components.append(
            _blob(
                rng.uniform(-0.9, 0.9),
                rng.uniform(-0.9, 0.9),
                size,
                size,
                0.0,
                rng.uniform(0.2, 1.0),
            )
        )
    return components, None


FamilyDraw = Callable[[np.random.Generator], Tuple[List[Component], Optional[Dict[str, float]]]]

_FAMILIES: Dict[str, FamilyDraw] = {
    "monocentric": _monocentric,
    "dual_core": _dual_core,
    "corridor": _corridor,
    "ring": _ring_city,
    "polycentric": _polycentric,
    "coastal": _coastal,
    "radial": _radial,
    "crescent": _crescent,
    "cross": _cross,
    "scatter": _scatter,
}


def draw_template(name: str, seed: int, index: int, attempt: int) -> TemplateSpec:
    """Draw the parameters of template ``index`` on the given attempt."""
    family = TEMPLATE_FAMILIES[index % len(TEMPLATE_FAMILIES)]
    rng = derive_rng(seed, "template", index, attempt)
    components, coast = _FAMILIES[family](rng)
    return TemplateSpec(
        name=name, family=family, components=tuple(components), coast=coast, attempt=attempt
    )


# ----------------------------------------------------------------------
# evaluation


def _axis(cells: int, scale: float) -> np.ndarray:
    return (np.arange(cells, dtype=np.float64) - cells // 2) / scale


def evaluate_template(
    spec: TemplateSpec, width: int, height: int, scale: float
) -> np.ndarray:
    """
    Evaluate a template on a width x height raster centered on the city.

    Cell i lies (i - n // 2) cells from the center; ``scale`` is the number
    of cells per template unit.
    """
    u, v = np.meshgrid(_axis(width, scale), _axis(height, scale), indexing="ij")
    return POPULATION_SCALE * spec.evaluate(u, v)


def _scale(grid: GridSpec) -> float:
    return max(grid.width, grid.height) / 2.0


def _allowed_transforms(grid: GridSpec) -> List[DihedralTransform]:
    return [t for t in DihedralTransform if grid.is_square or not t.swaps_axes]


def _correlation(a: np.ndarray, b: np.ndarray, cluster: Tuple[int, int]) -> float:
    try:
        return clustered_correlation(a, b, cluster)
    except CorrelationUndefinedError:
        return 1.0


def _rejection_reason(
    values: np.ndarray,
    accepted: List[Tuple[str, np.ndarray]],
    grid: GridSpec,
    cluster: Tuple[int, int],
) -> Optional[str]:
    transforms = _allowed_transforms(grid)
    for t in transforms:
        if t is DihedralTransform.IDENTITY:
            continue
        score = _correlation(transform_array(values, t), values, cluster)
        if score >= SELF_CORRELATION_LIMIT:
            return f"self-similar under {t.value} ({score:.3f})"
    for other_name, other in accepted:
        for t in transforms:
            score = _correlation(transform_array(values, t), other, cluster)
            if score >= PAIR_CORRELATION_LIMIT:
                return f"close to {other_name} under {t.value} ({score:.3f})"
    return None


def draw_templates(cfg: SynthConfig) -> List[TemplateSpec]:
    """
    Draw cfg.n_templates mutually distinguishable templates.

    Each template is redrawn until it is not self-similar under any
    non-identity symmetry and differs from every accepted template under
    every symmetry, both at cfg.cluster block resolution.

    Raises:
        TemplateIndistinguishableError: If a template fails MAX_ATTEMPTS draws
    """
    grid = cfg.grid
    scale = _scale(grid)
    accepted: List[Tuple[str, np.ndarray]] = []
    specs: List[TemplateSpec] = []

    for index, name in enumerate(template_names(cfg.n_templates)):
        reason: Optional[str] = None
        for attempt in range(MAX_ATTEMPTS):
            spec = draw_template(name, cfg.seed, index, attempt)
            values = evaluate_template(spec, grid.width, grid.height, scale)
            reason = _rejection_reason(values, accepted, grid, cfg.cluster)
            if reason is None:
                accepted.append((name, values))
                specs.append(spec)
                logger.debug("template_accepted", template=name, attempt=attempt)
                break
        else:
            logger.error("template_rejected", template=name, attempts=MAX_ATTEMPTS, reason=reason)
            raise TemplateIndistinguishableError(
                f"template {name} not distinguishable after {MAX_ATTEMPTS} draws: {reason}"
            )
    return specs


def _city_center(cfg: SynthConfig, index: int) -> Tuple[float, float]:
    return cfg.center_lat, cfg.center_lon + CITY_SPACING_DEG * (index - cfg.template_index)


def gen_city_rasters(cfg: SynthConfig) -> List[PopulationRaster]:
    """
    Candidate city rasters on the working grid.

    The planted city is centered at (cfg.center_lat, cfg.center_lon); the
    others are spaced CITY_SPACING_DEG apart in longitude.

    Raises:
        TemplateIndistinguishableError: If the templates cannot be separated

    Example:
        >>> rasters = gen_city_rasters(SynthConfig(seed=1, grid=GridSpec.parse("40x40"),
        ...                                        cluster=(8, 8)))
        >>> [r.name for r in rasters][:2]
        ['monocentric', 'dual_core']
    """
    grid = cfg.grid
    scale = _scale(grid)
    rasters = []
    for index, spec in enumerate(draw_templates(cfg)):
        lat, lon = _city_center(cfg, index)
        rasters.append(
            PopulationRaster(
                name=spec.name,
                density=evaluate_template(spec, grid.width, grid.height, scale),
                center_lat=lat,
                center_lon=lon,
                cell_size_m=grid.cell_size_m,
            )
        )
    logger.info("city_rasters_generated", templates=len(rasters), grid=grid.label())
    return rasters


def gen_region_raster(
    cfg: SynthConfig, template_id: Optional[str] = None, extent: float = 2.0
) -> PopulationRaster:
    """
    Evaluate one template over a region ``extent`` times wider than the grid.

    The region shares the grid's cell size and city center, so resampling
    it at the center reproduces the city raster exactly. Used as the
    sampler raster for alignment runs.

    Raises:
        ValidationError: If extent < 1 or the template is unknown
    """
    if extent < 1:
        raise ValidationError("must be >= 1", field="extent")
    name = template_id or cfg.template_id
    names = template_names(cfg.n_templates)
    if name not in names:
        raise ValidationError(f"unknown template {name!r}", field="template_id")

    index = names.index(name)
    spec = draw_templates(cfg)[index]
    grid = cfg.grid
    width = int(round(grid.width * extent))
    height = int(round(grid.height * extent))
    lat, lon = _city_center(cfg, index)
    return PopulationRaster(
        name=f"{name}-region",
        density=evaluate_template(spec, width, height, _scale(grid)),
        center_lat=lat,
        center_lon=lon,
        cell_size_m=grid.cell_size_m,
    )
