"""
Brute-force square oracle.

An independent search used to validate the finder: full-density diagonal
scan against a finely sampled polygon, then derivative-free refinement
along coordinate directions. No Newton steps and no analytic derivatives.
"""

from typing import List, Sequence
import logging

import numpy as np
from scipy.optimize import linear_sum_assignment, minimize
from scipy.spatial import cKDTree

from config.config import SEARCH_CONFIG
from curves.base import BaseCurve
from squares.candidate import Orientation, SquareCandidate
from squares.finder import deduplicate
from squares.residual import square_from_diagonal
from squares.seeding import local_minima
from utils.helpers import TWO_PI
from utils.validators import ValidationError, validate_grid

logger = logging.getLogger(__name__)


class SampledCurve:
    """Dense inscribed polygon of a curve with exact point-to-polygon distances."""

    def __init__(self, curve: BaseCurve, sample_count: int):
        self.count = sample_count
        self.params = curve.grid(sample_count)
        self.points = curve.eval(self.params)
        self.tree = cKDTree(self.points)

    def nearest(self, points: np.ndarray):
        """Distances to the polygon and the parameters of the nearest points."""
        points = np.atleast_2d(points)
        _, index = self.tree.query(points)
        best_distance = np.full(points.shape[0], np.inf)
        best_param = np.zeros(points.shape[0])
        h = TWO_PI / self.count

        for offset in (-1, 0):
            start = np.mod(index + offset, self.count)
            stop = np.mod(start + 1, self.count)
            a, b = self.points[start], self.points[stop]
            edge = b - a
            fraction = np.clip(np.einsum("md,md->m", points - a, edge) / np.einsum("md,md->m", edge, edge), 0.0, 1.0)
            foot = a + fraction[:, None] * edge
            distance = np.hypot(*(points - foot).T)
            better = distance < best_distance
            best_distance = np.where(better, distance, best_distance)
            best_param = np.where(better, self.params[start] + fraction * h, best_param)
        return best_distance, np.mod(best_param, TWO_PI)

    def objective(self, x: np.ndarray, curve: BaseCurve) -> float:
        p = curve.eval(x)
        p2, p4 = square_from_diagonal(p[0], p[1])
        distance, _ = self.nearest(np.vstack([p2, p4]))
        return float(distance @ distance)


def brute_force_oracle(curve: BaseCurve, grid_n: int = 64) -> List[SquareCandidate]:
    """
    Exhaustive diagonal scan with coordinate-direction refinement.

    Args:
        curve: Closed curve
        grid_n: Scan resolution (16..64)

    Returns:
        Deduplicated counterclockwise squares of positive sidelength, sorted
        by first parameter
    """
    if not validate_grid(grid_n) or grid_n > SEARCH_CONFIG["oracle_max_grid"]:
        raise ValidationError(f"Oracle grid must be an integer in [16, {SEARCH_CONFIG['oracle_max_grid']}]")

    length = curve.total_length
    accept = 1e-6 * length
    sampled = SampledCurve(curve, SEARCH_CONFIG["oracle_samples"])

    points = curve.samples(grid_n)
    p1 = np.repeat(points, grid_n, axis=0)
    p3 = np.tile(points, (grid_n, 1))
    p2, p4 = square_from_diagonal(p1, p3)
    d2, _ = sampled.nearest(p2)
    d4, _ = sampled.nearest(p4)
    diagonal = np.sum((p3 - p1) ** 2, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        score = ((d2 ** 2 + d4 ** 2) / diagonal).reshape(grid_n, grid_n)
    score[~np.isfinite(score)] = np.inf
    np.fill_diagonal(score, np.inf)

    rows, cols = local_minima(score, SEARCH_CONFIG["seed_threshold"])
    grid = curve.grid(grid_n)

    candidates = []
    for i, j in zip(rows, cols):
        x0 = np.array([grid[i], grid[j]])
        result = minimize(
            sampled.objective,
            x0,
            args=(curve,),
            method="Powell",
            options={"direc": np.eye(2) * (TWO_PI / grid_n), "xtol": 1e-12, "ftol": 1e-24, "maxfev": 4000},
        )
        residual = float(np.sqrt(max(result.fun, 0.0)))
        if residual > accept:
            continue

        p = curve.eval(result.x)
        q2, q4 = square_from_diagonal(p[0], p[1])
        _, params = sampled.nearest(np.vstack([q2, q4]))
        candidate = SquareCandidate.from_params(curve, [result.x[0], params[0], result.x[1], params[1]], residual)
        if candidate.orientation == Orientation.COUNTERCLOCKWISE:
            candidates.append(candidate.canonical())

    unique = deduplicate(candidates, SEARCH_CONFIG["dedup_factor"] * length)
    positive = [c for c in unique if c.sidelength >= SEARCH_CONFIG["min_sidelength_factor"] * length]
    squares = sorted(positive, key=lambda c: float(c.params[0]))
    logger.info(f"Oracle scanned {grid_n}² diagonals, {len(rows)} minima, {len(squares)} squares")
    return squares


def match_squares(a: Sequence[SquareCandidate], b: Sequence[SquareCandidate]):
    """
    Minimum-cost bipartite matching on vertex distance.

    Returns:
        List of (index in a, index in b, vertex distance)
    """
    if not a or not b:
        return []
    cost = np.array([[x.vertex_distance(y) for y in b] for x in a])
    rows, cols = linear_sum_assignment(cost)
    return [(int(i), int(j), float(cost[i, j])) for i, j in zip(rows, cols)]


def oracle_agreement(a: Sequence[SquareCandidate], b: Sequence[SquareCandidate], tol: float = 1e-4) -> bool:
    """True when the two square lists match bijectively within ``tol``."""
    if len(a) != len(b):
        return False
    return all(distance <= tol for _, _, distance in match_squares(a, b))
