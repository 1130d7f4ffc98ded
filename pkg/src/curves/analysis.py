"""
Curve Analysis Module.

Curvature, arclength and reach computations for regular closed curves.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional
import logging
import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from config.config import CURVE_CONFIG
from curves.base import ArrayLike, BaseCurve
from curves.polyline import PolylineCurve
from utils.errors import DegenerateSpeedError
from utils.helpers import TWO_PI
from utils.validators import ValidationError

logger = logging.getLogger(__name__)


def unsigned_curvature(curve: BaseCurve, s: ArrayLike) -> ArrayLike:
    """
    |γ′ × γ″| / |γ′|³ at ``s``.

    Args:
        curve: Regular smooth curve
        s: Parameter or array of parameters

    Returns:
        Curvature with the shape of ``s``

    Raises:
        DegenerateSpeedError: If |γ′(s)| is below the regularity tolerance
    """
    d1 = curve.derivative(s, 1)
    d2 = curve.derivative(s, 2)
    speed = np.hypot(d1[..., 0], d1[..., 1])

    if np.any(speed < curve.regularity_tolerance):
        raise DegenerateSpeedError(f"Speed {float(np.min(speed)):.3e} below regularity tolerance")

    cross = d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]
    return np.abs(cross) / speed ** 3


def max_unsigned_curvature(curve: BaseCurve, n: Optional[int] = None) -> float:
    """
    Maximum unsigned curvature: dense sampling followed by bounded
    scalar refinement around the best sample.

    Args:
        curve: Regular smooth curve
        n: Number of samples (at least 64)

    Returns:
        κ_max
    """
    n = n or CURVE_CONFIG["curvature_samples"]
    if n < 64:
        raise ValidationError("Curvature sampling needs at least 64 samples")

    grid = curve.grid(n)
    kappa = unsigned_curvature(curve, grid)
    best = int(np.argmax(kappa))
    h = TWO_PI / n

    result = minimize_scalar(
        lambda s: -float(unsigned_curvature(curve, s)),
        bounds=(grid[best] - h, grid[best] + h),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(max(kappa[best], -result.fun))


def arc_length(curve: BaseCurve, s0: float, s1: float) -> float:
    """
    Length of the forward arc from ``s0`` to ``s1``.

    The forward arc has parameter extent (s1 − s0) mod 2π; equal
    endpoints give 0, never the full loop.
    """
    delta = float(np.mod(s1 - s0, TWO_PI))
    if delta == 0.0:
        return 0.0

    if isinstance(curve, PolylineCurve):
        return curve.total_length * delta / TWO_PI

    tolerance = CURVE_CONFIG["quadrature_factor"] * curve.total_length
    value, _ = quad(curve.speed, s0, s0 + delta, epsabs=tolerance, epsrel=1e-12, limit=200)
    return float(value)


@dataclass
class CurveAnalysis:
    """
    Cached analysis of a curve: curvature maximum and an arclength table
    on a uniform parameter grid.

    Attributes:
        max_unsigned_curvature: κ_max (inf for polylines)
        total_length: Final entry of the arclength table
        sample_count: Number of grid intervals
        arclength_table: Cumulative arclength at s_i = 2πi/n, i = 0..n
    """

    curve: BaseCurve = field(repr=False)
    max_unsigned_curvature: float
    total_length: float
    sample_count: int
    arclength_table: np.ndarray = field(repr=False)

    @property
    def table_params(self) -> np.ndarray:
        return np.arange(self.sample_count + 1) * (TWO_PI / self.sample_count)

    def _partial(self, start: np.ndarray, stop: np.ndarray) -> np.ndarray:
        nodes, weights = np.polynomial.legendre.leggauss(CURVE_CONFIG["table_gauss_points"])
        half = 0.5 * (stop - start)
        points = start[:, None] + half[:, None] * (nodes[None, :] + 1.0)
        speeds = self.curve.speed(points.ravel()).reshape(points.shape)
        return half * (speeds @ weights)

    def length_at(self, s: ArrayLike) -> ArrayLike:
        """Arclength from parameter 0 to ``s`` (mod 2π)."""
        s_arr = np.atleast_1d(np.mod(np.asarray(s, dtype=float), TWO_PI))
        h = TWO_PI / self.sample_count
        index = np.clip(np.floor(s_arr / h).astype(int), 0, self.sample_count - 1)
        values = self.arclength_table[index] + self._partial(index * h, s_arr)
        return values if np.ndim(s) else float(values[0])

    def param_at_length(self, length: ArrayLike) -> ArrayLike:
        """Inverse of :meth:`length_at` on [0, total_length)."""
        target = np.atleast_1d(np.mod(np.asarray(length, dtype=float), self.total_length))
        h = TWO_PI / self.sample_count
        index = np.clip(np.searchsorted(self.arclength_table, target, side="right") - 1, 0, self.sample_count - 1)
        lower = index * h
        s = lower + (target - self.arclength_table[index]) / self.curve.speed(lower)
        for _ in range(6):
            s = np.clip(s, lower, lower + h)
            s = s - (self.length_at(s) - target) / self.curve.speed(s)
        s = np.clip(s, lower, lower + h)
        return s if np.ndim(length) else float(s[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_unsigned_curvature": self.max_unsigned_curvature,
            "total_length": self.total_length,
            "sample_count": self.sample_count,
        }


def analyze_curve(curve: BaseCurve, n: Optional[int] = None) -> CurveAnalysis:
    """
    Build the analysis record of a curve.

    Args:
        curve: Regular curve
        n: Number of table intervals

    Returns:
        CurveAnalysis
    """
    n = n or CURVE_CONFIG["sample_count"]
    if n < 64:
        raise ValidationError("Arclength tables need at least 64 intervals")

    if isinstance(curve, PolylineCurve):
        # Corners carry unbounded curvature
        kappa = math.inf
        table = curve.total_length * np.arange(n + 1) / n
        return CurveAnalysis(curve, kappa, curve.total_length, n, table)

    kappa = max_unsigned_curvature(curve)
    analysis = CurveAnalysis(curve, kappa, 0.0, n, np.zeros(n + 1))
    grid = analysis.table_params
    pieces = analysis._partial(grid[:-1], grid[1:])
    table = np.concatenate([[0.0], np.cumsum(pieces)])
    analysis.arclength_table = table
    analysis.total_length = float(table[-1])
    logger.debug(f"Analysed curve: κ_max={kappa:.6g}, L={analysis.total_length:.10g}")
    return analysis


def tube_radius(curve: BaseCurve, n: Optional[int] = None) -> float:
    """
    Radius of the largest embedded normal tube about ``curve``:
    min(1/κ_max, bottleneck/2), where the bottleneck is the smallest chord
    between points at least π/κ_max apart along the curve.
    """
    n = n or CURVE_CONFIG["curvature_samples"]
    kappa = max_unsigned_curvature(curve, n)

    analysis = analyze_curve(curve, n)
    grid = curve.grid(n)
    arc = analysis.length_at(grid)
    points = curve.eval(grid)

    separation = np.abs(arc[:, None] - arc[None, :])
    separation = np.minimum(separation, analysis.total_length - separation)
    chords = np.hypot(points[:, None, 0] - points[None, :, 0], points[:, None, 1] - points[None, :, 1])
    far = separation >= math.pi / kappa

    bottleneck = float(np.min(chords[far])) if np.any(far) else math.inf
    return float(min(1.0 / kappa, 0.5 * bottleneck))
