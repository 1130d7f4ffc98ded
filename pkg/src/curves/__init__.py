"""
Curves Module.

This module provides closed plane curve representations (harmonic series
and polygons) with evaluation, curvature, arclength, simplicity testing,
nearest-point projection and circle-map degree.
"""

from .base import BaseCurve
from .fourier import FourierCurve, PeriodicSeries, coefficient_table, fit_harmonics
from .polyline import PolylineCurve, polygon_area, regular_polygon, sample_polyline
from .analysis import (
    CurveAnalysis,
    analyze_curve,
    arc_length,
    max_unsigned_curvature,
    tube_radius,
    unsigned_curvature,
)
from .geometry import find_self_intersections, is_simple
from .projection import ProjectionResult, nearest_point_projection, project_points
from .winding import lift_samples, winding_degree
from .factory import (
    add_harmonic_wiggle,
    make_circle,
    make_ellipse,
    make_figure_eight,
    make_peanut,
    perturb_fourier,
    random_perturbed_ellipses,
)

__all__ = [
    'BaseCurve',
    'FourierCurve',
    'PeriodicSeries',
    'PolylineCurve',
    'CurveAnalysis',
    'ProjectionResult',
    'coefficient_table',
    'fit_harmonics',
    'polygon_area',
    'regular_polygon',
    'sample_polyline',
    'analyze_curve',
    'arc_length',
    'max_unsigned_curvature',
    'tube_radius',
    'unsigned_curvature',
    'find_self_intersections',
    'is_simple',
    'nearest_point_projection',
    'project_points',
    'lift_samples',
    'winding_degree',
    'add_harmonic_wiggle',
    'make_circle',
    'make_ellipse',
    'make_figure_eight',
    'make_peanut',
    'perturb_fourier',
    'random_perturbed_ellipses',
]
