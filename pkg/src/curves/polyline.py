"""
Polyline Curve Module.

Closed polygons parametrised proportionally to arclength over [0, 2π).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from curves.base import ArrayLike, BaseCurve
from utils.helpers import TWO_PI, rotation_matrix
from utils.validators import ValidationError, validate_points


@dataclass(frozen=True, eq=False)
class PolylineCurve(BaseCurve):
    """
    Closed polygon through ``vertices`` (the closing edge is implicit).

    Attributes:
        vertices: Array of shape (n, 2)
        jordan: Caller's claim that the polygon is simple
    """

    vertices: np.ndarray
    jordan: bool = False
    _sample_cache: Dict[int, np.ndarray] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if not validate_points(self.vertices):
            raise ValidationError("Polyline needs at least 3 finite vertices with distinct neighbours")

        vertices = np.array(self.vertices, dtype=float)
        vertices.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)

        edges = np.roll(vertices, -1, axis=0) - vertices
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        cumulative = np.concatenate([[0.0], np.cumsum(lengths)])
        object.__setattr__(self, "_edges", edges)
        object.__setattr__(self, "_edge_lengths", lengths)
        object.__setattr__(self, "_cumulative", cumulative)

    @property
    def kind(self) -> str:
        return "polyline"

    @property
    def vertex_count(self) -> int:
        return self.vertices.shape[0]

    @property
    def total_length(self) -> float:
        return float(self._cumulative[-1])

    @property
    def vertex_params(self) -> np.ndarray:
        """Parameters at which the vertices are reached."""
        return TWO_PI * self._cumulative[:-1] / self.total_length

    def _locate(self, s: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        """Edge index and distance along that edge for each parameter."""
        position = np.mod(np.asarray(s, dtype=float), TWO_PI) * (self.total_length / TWO_PI)
        index = np.searchsorted(self._cumulative, position, side="right") - 1
        index = np.clip(index, 0, self.vertex_count - 1)
        return index, position - self._cumulative[index]

    def derivative(self, s: ArrayLike, order: int = 0) -> np.ndarray:
        index, along = self._locate(s)
        direction = self._edges[index] / self._edge_lengths[index][..., None]

        if order == 0:
            return self.vertices[index] + along[..., None] * direction
        if order == 1:
            # Constant speed L / 2π on every edge
            return direction * (self.total_length / TWO_PI)
        return np.zeros_like(direction)

    def _segment_projection(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Per point and per edge: clamped edge fraction and squared distance."""
        offsets = points[:, None, :] - self.vertices[None, :, :]
        fraction = np.einsum("mnd,nd->mn", offsets, self._edges) / (self._edge_lengths ** 2)
        fraction = np.clip(fraction, 0.0, 1.0)
        nearest = self.vertices[None, :, :] + fraction[..., None] * self._edges[None, :, :]
        gap = points[:, None, :] - nearest
        return fraction, np.einsum("mnd,mnd->mn", gap, gap)

    def distance(self, points: np.ndarray) -> np.ndarray:
        """Exact Euclidean distance from each point to the polygon."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        _, squared = self._segment_projection(points)
        return np.sqrt(np.min(squared, axis=1))

    def project(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Exact nearest-point projection onto the polygon.

        Args:
            points: Array of shape (m, 2)

        Returns:
            Tuple of (parameters, distances, runner-up distances); the
            runner-up is the best distance attained on an edge that is not
            adjacent to the winning one
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        fraction, squared = self._segment_projection(points)
        rows = np.arange(points.shape[0])
        best = np.argmin(squared, axis=1)
        along = self._cumulative[best] + fraction[rows, best] * self._edge_lengths[best]
        params = np.mod(along * (TWO_PI / self.total_length), TWO_PI)

        n = self.vertex_count
        offset = np.abs(np.arange(n)[None, :] - best[:, None])
        near_best = np.minimum(offset, n - offset) <= 1
        runner_up = np.where(near_best, np.inf, squared).min(axis=1)
        return params, np.sqrt(squared[rows, best]), np.sqrt(runner_up)

    def transformed(self, angle: float = 0.0, shift: Any = (0.0, 0.0)) -> "PolylineCurve":
        moved = self.vertices @ rotation_matrix(angle).T + np.asarray(shift, dtype=float)
        return PolylineCurve(moved, jordan=self.jordan)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": self.kind,
            "points": self.vertices.tolist(),
            "jordan": bool(self.jordan),
        }


def sample_polyline(curve: BaseCurve, n: int, jordan: Optional[bool] = None) -> PolylineCurve:
    """Inscribed polygon through ``n`` uniformly spaced parameters of ``curve``."""
    if n < 3:
        raise ValidationError("A polyline needs at least 3 vertices")
    claim = curve.jordan if jordan is None else jordan
    return PolylineCurve(curve.eval(curve.grid(n)), jordan=claim)


def polygon_area(points: np.ndarray) -> float:
    """Signed shoelace area (positive for counterclockwise order)."""
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def regular_polygon(n: int, radius: float = 1.0, phase: float = 0.0) -> PolylineCurve:
    """Counterclockwise regular n-gon inscribed in a circle."""
    angles = phase + np.arange(n) * (TWO_PI / n)
    return PolylineCurve(radius * np.column_stack([np.cos(angles), np.sin(angles)]), jordan=True)


