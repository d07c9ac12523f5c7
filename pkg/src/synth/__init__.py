"""Synthetic cities and releases with planted ground truth."""

from src.synth.config import TEMPLATE_FAMILIES, SynthConfig, VenueSpike, template_names
from src.synth.generator import gen_traces, load_ground_truth, write_ground_truth
from src.synth.templates import (
    MAX_ATTEMPTS,
    TemplateSpec,
    draw_templates,
    gen_city_rasters,
    gen_region_raster,
)

__all__ = [
    # Configuration
    "SynthConfig",
    "VenueSpike",
    "TEMPLATE_FAMILIES",
    "template_names",
    # Templates
    "MAX_ATTEMPTS",
    "TemplateSpec",
    "draw_templates",
    "gen_city_rasters",
    "gen_region_raster",
    # Trajectories
    "gen_traces",
    "write_ground_truth",
    "load_ground_truth",
]
