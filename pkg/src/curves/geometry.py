"""
Polygon geometry predicates used for simplicity checks.
"""

from typing import List, Optional, Tuple
import logging

import numpy as np

from config.config import CURVE_CONFIG
from curves.base import BaseCurve
from curves.polyline import PolylineCurve
from utils.validators import ValidationError

logger = logging.getLogger(__name__)

_BLOCK = 256


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def find_self_intersections(points: np.ndarray, limit: Optional[int] = None) -> List[Tuple[int, int]]:
    """
    Pairs of non-adjacent edges of a closed polygon that meet.

    Touching and collinear overlap count as meeting.

    Args:
        points: Polygon vertices, shape (n, 2), closing edge implicit
        limit: Stop after this many pairs

    Returns:
        List of (i, j) edge index pairs with i < j
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    start = points
    stop = np.roll(points, -1, axis=0)
    extent = np.ptp(points, axis=0)
    eps = 1e-12 * float(np.dot(extent, extent))

    found: List[Tuple[int, int]] = []
    columns = np.arange(n)
    for block in range(0, n, _BLOCK):
        rows = np.arange(block, min(block + _BLOCK, n))
        p, q = start[rows][:, None, :], stop[rows][:, None, :]
        r, t = start[None, :, :], stop[None, :, :]

        d = q - p
        e = t - r
        o1 = _cross(d[..., 0], d[..., 1], r[..., 0] - p[..., 0], r[..., 1] - p[..., 1])
        o2 = _cross(d[..., 0], d[..., 1], t[..., 0] - p[..., 0], t[..., 1] - p[..., 1])
        o3 = _cross(e[..., 0], e[..., 1], p[..., 0] - r[..., 0], p[..., 1] - r[..., 1])
        o4 = _cross(e[..., 0], e[..., 1], q[..., 0] - r[..., 0], q[..., 1] - r[..., 1])

        proper = (o1 * o2 < 0) & (o3 * o4 < 0)

        def on_segment(o, a, b, c):
            lo = np.minimum(a, b) - 1e-12
            hi = np.maximum(a, b) + 1e-12
            inside = np.all((c >= lo) & (c <= hi), axis=-1)
            return (np.abs(o) <= eps) & inside

        touching = (
            on_segment(o1, p, q, r)
            | on_segment(o2, p, q, t)
            | on_segment(o3, r, t, p)
            | on_segment(o4, r, t, q)
        )

        i = rows[:, None]
        j = columns[None, :]
        adjacent = (j == i + 1) | ((i == 0) & (j == n - 1))
        mask = (proper | touching) & (j > i) & ~adjacent

        for a, b in zip(*np.nonzero(mask)):
            found.append((int(rows[a]), int(b)))
            if limit is not None and len(found) >= limit:
                return found
    return found


def is_simple(curve: BaseCurve, n: Optional[int] = None) -> bool:
    """
    Simplicity test on a sampled polygon of the curve.

    Polylines are tested on their own vertices; smooth curves on ``n``
    uniform parameter samples. A negative answer is reliable; a positive
    one holds up to the sampling resolution.

    Args:
        curve: Curve to test
        n: Sample count for smooth curves (at least 32)

    Returns:
        True if no two non-adjacent edges meet
    """
    if isinstance(curve, PolylineCurve):
        points = curve.vertices
    else:
        n = n or CURVE_CONFIG["simplicity_resolution"]
        if n < 32:
            raise ValidationError("Simplicity test needs at least 32 samples")
        points = curve.samples(n)

    hits = find_self_intersections(points, limit=1)
    if hits:
        logger.debug(f"Edges {hits[0]} intersect")
    return not hits
