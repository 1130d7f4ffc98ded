"""
Diagonal seed search.

Every grid pair (s1, s3) spans a diagonal; the two remaining vertices of
the counterclockwise square on that diagonal are scored by their distance
to the curve, and local minima of the score become refinement seeds.
"""

from typing import Optional, Tuple
import logging

import numpy as np
from scipy.ndimage import minimum_filter
from scipy.spatial import cKDTree

from config.config import SEARCH_CONFIG
from curves.base import BaseCurve
from curves.polyline import PolylineCurve
from curves.projection import project_points
from squares.residual import square_from_diagonal
from utils.validators import ValidationError, validate_grid

logger = logging.getLogger(__name__)


class DistanceField:
    """
    Approximate distance-to-curve queries backed by a KD-tree over dense
    curve samples.
    """

    def __init__(self, curve: BaseCurve, sample_count: int):
        if isinstance(curve, PolylineCurve):
            sample_count = max(sample_count, 8 * curve.vertex_count)
        self.curve = curve
        self.samples = curve.samples(sample_count)
        self.tree = cKDTree(self.samples)

    def distance(self, points: np.ndarray) -> np.ndarray:
        flat = points.reshape(-1, 2)
        distances, _ = self.tree.query(flat)
        return distances.reshape(points.shape[:-1])


def diagonal_scores(curve: BaseCurve, grid_n: int, field: Optional[DistanceField] = None) -> np.ndarray:
    """
    Relative diagonal score on the grid_n × grid_n parameter grid.

    score[i, j] = (d(p2)² + d(p4)²) / |p3 − p1|² for the square with
    diagonal γ(s_i) → γ(s_j); the diagonal i = j is +inf.
    """
    if field is None:
        field = DistanceField(curve, SEARCH_CONFIG["distance_oversampling"] * grid_n)

    points = curve.samples(grid_n)
    p1 = np.broadcast_to(points[:, None, :], (grid_n, grid_n, 2))
    p3 = np.broadcast_to(points[None, :, :], (grid_n, grid_n, 2))
    p2, p4 = square_from_diagonal(p1, p3)

    diagonal = np.sum((p3 - p1) ** 2, axis=-1)
    d2 = field.distance(p2)
    d4 = field.distance(p4)

    with np.errstate(divide="ignore", invalid="ignore"):
        score = (d2 ** 2 + d4 ** 2) / diagonal
    score[~np.isfinite(score)] = np.inf
    np.fill_diagonal(score, np.inf)
    return score


def local_minima(score: np.ndarray, threshold: float) -> Tuple[np.ndarray, np.ndarray]:
    """Upper-triangle grid cells that are periodic 3×3 minima below ``threshold``."""
    finite = np.where(np.isfinite(score), score, np.finfo(float).max)
    is_min = minimum_filter(finite, size=3, mode="wrap") == finite
    rows, cols = np.nonzero(is_min & (score < threshold))
    keep = rows < cols
    return rows[keep], cols[keep]


def diagonal_seed_search(
    curve: BaseCurve,
    grid_n: int,
    threshold: Optional[float] = None,
    max_seeds: Optional[int] = None,
) -> np.ndarray:
    """
    Seeds for the square refinement.

    Args:
        curve: Closed curve
        grid_n: Grid resolution (≥ 16)
        threshold: Relative score cut-off
        max_seeds: Keep at most this many seeds, best scores first

    Returns:
        Array of shape (m, 4) of parameters (s1, s2, s3, s4), ordered by score
    """
    if not validate_grid(grid_n):
        raise ValidationError(f"Seed grid must be an integer ≥ 16, got {grid_n}")

    threshold = SEARCH_CONFIG["seed_threshold"] if threshold is None else threshold
    max_seeds = max_seeds or SEARCH_CONFIG["max_seeds"]

    score = diagonal_scores(curve, grid_n)
    rows, cols = local_minima(score, threshold)
    if rows.size == 0:
        logger.debug(f"No seeds below threshold {threshold} on a {grid_n}² grid")
        return np.empty((0, 4))

    order = np.argsort(score[rows, cols], kind="stable")
    if order.size > max_seeds:
        logger.info(f"Keeping {max_seeds} of {order.size} seeds")
        order = order[:max_seeds]
    rows, cols = rows[order], cols[order]

    grid = curve.grid(grid_n)
    points = curve.samples(grid_n)
    p2, p4 = square_from_diagonal(points[rows], points[cols])
    projected = project_points(curve, np.vstack([p2, p4])).params
    m = rows.size

    seeds = np.column_stack([grid[rows], projected[:m], grid[cols], projected[m:]])
    logger.debug(f"Diagonal search on a {grid_n}² grid produced {m} seeds")
    return seeds
