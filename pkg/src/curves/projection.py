"""
Nearest-point projection onto a curve.
"""

from typing import NamedTuple, Optional
import logging

import numpy as np

from config.config import CURVE_CONFIG
from curves.base import BaseCurve
from curves.polyline import PolylineCurve
from utils.helpers import TWO_PI

logger = logging.getLogger(__name__)


class ProjectionResult(NamedTuple):
    """Nearest parameter, its distance, and whether a distinct point ties."""

    param: float
    distance: float
    ambiguous: bool


class BatchProjection(NamedTuple):
    params: np.ndarray
    distances: np.ndarray
    ambiguous: np.ndarray


def _polish(curve: BaseCurve, points: np.ndarray, s: np.ndarray, h: float, iterations: int = 40) -> np.ndarray:
    """
    Safeguarded Newton on g(s) = (γ(s) − p)·γ′(s) inside [s − h, s + h].
    """
    lo = s - h
    hi = s + h
    for _ in range(iterations):
        position = curve.derivative(s, 0)
        d1 = curve.derivative(s, 1)
        d2 = curve.derivative(s, 2)
        gap = position - points
        g = np.einsum("md,md->m", gap, d1)
        dg = np.einsum("md,md->m", d1, d1) + np.einsum("md,md->m", gap, d2)

        lo = np.where(g < 0.0, s, lo)
        hi = np.where(g >= 0.0, s, hi)

        with np.errstate(divide="ignore", invalid="ignore"):
            newton = s - g / dg
        safe = (dg > 0.0) & (newton > lo) & (newton < hi)
        step = np.where(safe, newton, 0.5 * (lo + hi))
        if np.all(np.abs(step - s) <= 1e-15 * TWO_PI):
            s = step
            break
        s = step
    return s


def project_points(curve: BaseCurve, points: np.ndarray, n: Optional[int] = None) -> BatchProjection:
    """
    Nearest-point projection of many points at once.

    Grid seeds are refined by safeguarded Newton; the best and the best
    non-neighbouring local minimum are both refined, and the point is
    flagged ambiguous when they tie at distinct curve points.

    Args:
        curve: Target curve
        points: Array of shape (m, 2)
        n: Grid seeds for smooth curves

    Returns:
        BatchProjection of parameters in [0, 2π), distances, ambiguity flags
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    scale = max(1.0, curve.total_length)
    tie = CURVE_CONFIG["projection_ambiguity"] * scale

    if isinstance(curve, PolylineCurve):
        params, distances, runner_up = curve.project(points)
        ambiguous = runner_up - distances <= tie
        return BatchProjection(params, distances, ambiguous)

    n = n or CURVE_CONFIG["projection_seeds"]
    grid = curve.grid(n)
    samples = curve.samples(n)
    h = TWO_PI / n
    rows = np.arange(points.shape[0])

    squared = ((points[:, None, :] - samples[None, :, :]) ** 2).sum(axis=-1)
    best = np.argmin(squared, axis=1)

    local_min = (squared <= np.roll(squared, 1, axis=1)) & (squared <= np.roll(squared, -1, axis=1))
    offset = np.abs(np.arange(n)[None, :] - best[:, None])
    far = np.minimum(offset, n - offset) > 2
    rival_scores = np.where(local_min & far, squared, np.inf)
    rival = np.argmin(rival_scores, axis=1)
    has_rival = np.isfinite(rival_scores[rows, rival])

    first = _polish(curve, points, grid[best], h)
    first_distance = np.hypot(*(curve.eval(first) - points).T)
    grid_distance = np.sqrt(squared[rows, best])
    # Keep the grid sample if the polish wandered uphill
    first = np.where(first_distance <= grid_distance, first, grid[best])
    first_distance = np.minimum(first_distance, grid_distance)

    ambiguous = np.zeros(points.shape[0], dtype=bool)
    if np.any(has_rival):
        idx = np.nonzero(has_rival)[0]
        second = _polish(curve, points[idx], grid[rival[idx]], h)
        second_points = curve.eval(second)
        second_distance = np.hypot(*(second_points - points[idx]).T)

        tied = np.abs(second_distance - first_distance[idx]) <= tie
        apart = np.hypot(*(curve.eval(first[idx]) - second_points).T) > 1e-6 * scale
        ambiguous[idx] = tied & apart

        better = second_distance < first_distance[idx]
        first[idx] = np.where(better, second, first[idx])
        first_distance[idx] = np.minimum(first_distance[idx], second_distance)

    return BatchProjection(np.mod(first, TWO_PI), first_distance, ambiguous)


def nearest_point_projection(curve: BaseCurve, point, n: Optional[int] = None) -> ProjectionResult:
    """
    Parameter of the point of ``curve`` nearest to ``point``.

    Args:
        curve: Target curve
        point: Plane point
        n: Grid seeds

    Returns:
        ProjectionResult(param, distance, ambiguous)
    """
    batch = project_points(curve, np.asarray(point, dtype=float)[None, :], n)
    result = ProjectionResult(float(batch.params[0]), float(batch.distances[0]), bool(batch.ambiguous[0]))
    if result.ambiguous:
        logger.warning(f"Projection of {tuple(np.round(point, 6))} is ambiguous at distance {result.distance:.6g}")
    return result
