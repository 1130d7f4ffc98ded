"""
CLI I/O Module.

This module provides curve and homotopy file formats, scenario generators
and SVG rendering. The command-line entry point lives in ``cli_io.cli``.
"""

from .curve_io import (
    counterclockwise,
    curve_to_json,
    load_homotopy,
    parse_curve,
    read_curve,
    read_homotopy_spec,
    write_curve,
)
from .scenarios import ScenarioKind, ScenarioSpec, generate, generate_curves
from .svg import render_svg, write_frames, write_svg

__all__ = [
    'counterclockwise',
    'curve_to_json',
    'load_homotopy',
    'parse_curve',
    'read_curve',
    'read_homotopy_spec',
    'write_curve',
    'ScenarioKind',
    'ScenarioSpec',
    'generate',
    'generate_curves',
    'render_svg',
    'write_frames',
    'write_svg',
]
