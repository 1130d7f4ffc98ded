"""
Square Candidate Module.

Generalised inscribed squares: four curve parameters, their vertices and
quality measures.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from curves.base import BaseCurve
from squares.residual import residual_from_points
from utils.helpers import TWO_PI
from utils.validators import ValidationError, validate_quadruple


class Orientation(str, Enum):
    """Turning direction of the labelled quadrilateral p1→p2→p3→p4."""

    COUNTERCLOCKWISE = "counterclockwise"
    CLOCKWISE = "clockwise"


def orientation_of(vertices: np.ndarray) -> Orientation:
    """Sign of cross(p2 − p1, p3 − p2); zero counts as counterclockwise."""
    a = vertices[1] - vertices[0]
    b = vertices[2] - vertices[1]
    cross = a[0] * b[1] - a[1] * b[0]
    return Orientation.CLOCKWISE if cross < 0 else Orientation.COUNTERCLOCKWISE


@dataclass(frozen=True, eq=False)
class SquareCandidate:
    """
    Inscribed square candidate.

    Attributes:
        params: Curve parameters ν1..ν4 in [0, 2π)
        vertices: Points γ(ν_i), shape (4, 2)
        residual_norm: Euclidean norm of the residual system at ``params``
        sidelength: |p2 − p1|
        orientation: Turning direction of the labelling
        iterations: Refinement iterations used
        continuum: True when the solution sits on a square continuum
    """

    params: np.ndarray
    vertices: np.ndarray
    residual_norm: float
    sidelength: float
    orientation: Orientation
    iterations: int = 0
    continuum: bool = False

    @classmethod
    def from_params(
        cls,
        curve: BaseCurve,
        params,
        residual_norm: Optional[float] = None,
        iterations: int = 0,
        continuum: bool = False,
    ) -> "SquareCandidate":
        """
        Build a candidate by evaluating ``curve`` at ``params``.

        Args:
            curve: Curve the square is inscribed in
            params: Four parameters (wrapped to [0, 2π))
            residual_norm: Precomputed residual norm; evaluated when None
            iterations: Refinement iterations used
            continuum: Continuum flag

        Returns:
            SquareCandidate
        """
        if not validate_quadruple(params):
            raise ValidationError("A square candidate needs four finite parameters")

        wrapped = np.mod(np.asarray(params, dtype=float), TWO_PI)
        vertices = curve.eval(wrapped)
        if residual_norm is None:
            residual_norm = float(np.linalg.norm(residual_from_points(vertices)))

        wrapped.setflags(write=False)
        vertices.setflags(write=False)
        return cls(
            params=wrapped,
            vertices=vertices,
            residual_norm=float(residual_norm),
            sidelength=float(np.linalg.norm(vertices[1] - vertices[0])),
            orientation=orientation_of(vertices),
            iterations=iterations,
            continuum=continuum,
        )

    @property
    def side_lengths(self) -> np.ndarray:
        edges = np.roll(self.vertices, -1, axis=0) - self.vertices
        return np.hypot(edges[:, 0], edges[:, 1])

    @property
    def diagonals(self) -> np.ndarray:
        return np.array([
            np.linalg.norm(self.vertices[2] - self.vertices[0]),
            np.linalg.norm(self.vertices[3] - self.vertices[1]),
        ])

    @property
    def center(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def shifted(self, shift: int) -> "SquareCandidate":
        """Cyclic relabelling: vertex i becomes vertex (i − shift) mod 4."""
        params = np.roll(self.params, -shift)
        vertices = np.roll(self.vertices, -shift, axis=0)
        params.setflags(write=False)
        vertices.setflags(write=False)
        return replace(
            self,
            params=params,
            vertices=vertices,
            sidelength=float(np.linalg.norm(vertices[1] - vertices[0])),
        )

    def canonical(self) -> "SquareCandidate":
        """Relabelling that starts at the smallest parameter."""
        return self.shifted(int(np.argmin(self.params)))

    def vertex_distance(self, other: "SquareCandidate") -> float:
        """
        Largest vertex displacement between two candidates, minimised over
        the four cyclic relabellings of ``other``.
        """
        return float(min(
            np.max(np.linalg.norm(self.vertices - np.roll(other.vertices, -k, axis=0), axis=1))
            for k in range(4)
        ))

    def is_square(self, rel_tol: float = 1e-7) -> bool:
        """Four equal sides and two equal diagonals, relative to the sidelength."""
        sides = self.side_lengths
        diagonals = self.diagonals
        scale = max(float(np.max(sides)), 1e-300)
        return bool(
            np.ptp(sides) <= rel_tol * scale
            and abs(diagonals[0] - diagonals[1]) <= rel_tol * max(float(np.max(diagonals)), 1e-300)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.tolist(),
            "vertices": self.vertices.tolist(),
            "sidelength": self.sidelength,
            "residual_norm": self.residual_norm,
            "orientation": self.orientation.value,
            "iterations": self.iterations,
            "continuum": self.continuum,
        }
